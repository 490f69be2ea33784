// Copyright 2026 The scisumm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Paper records: parsing the input schema, subsection merging, figure/table
// reference detection and corpus de-duplication.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scisumm/entities.hpp"
#include "scisumm/errors.hpp"
#include "scisumm/textproc.hpp"

namespace scisumm {

enum class Source { kArxiv, kAcl, kOther };

inline std::string_view source_name(Source s) {
  switch (s) {
    case Source::kArxiv: return "arxiv";
    case Source::kAcl: return "acl";
    case Source::kOther: return "other";
  }
  return "other";
}

struct RefMention {
  std::size_t position = 0;
  std::string ref_id;  // "figure-N" or "table-N"

  bool operator==(const RefMention&) const = default;
};

struct Figure {
  std::string ref_id;
  std::string caption;

  bool operator==(const Figure&) const = default;
};

/// Input section before merging; depth 1 is a top-level heading.
struct RawSection {
  std::string title;
  int depth = 1;
  std::string text;
};

struct SectionDoc {
  std::size_t section_id = 0;
  std::string title;
  std::string text;
  std::vector<SentenceUnit> sentences;
  std::vector<RefMention> ref_mentions;
  std::vector<EntityMention> mentions;

  bool operator==(const SectionDoc&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> authors;
  std::string venue;
  int year = 0;
  Source source = Source::kOther;
  std::vector<SectionDoc> sections;
  std::vector<Figure> figures;

  EntitySet entities() const {
    EntitySet out;
    for (const auto& s : sections) {
      for (const auto& m : s.mentions) out.insert(m.entity);
    }
    return out;
  }
  bool operator==(const PaperRecord&) const = default;

  std::size_t sentence_count() const {
    std::size_t n = 0;
    for (const auto& s : sections) n += s.sentences.size();
    return n;
  }
};

/// Folds depth>1 sections into the nearest preceding depth-1 section. The
/// child title is kept as an inline prefix of its paragraph:
/// parent + "\n\n" + child.title + "\n" + child.text. A leading subsection
/// with no parent becomes a top-level section of its own.
inline std::vector<SectionDoc> merge_subsections(const std::vector<RawSection>& raw) {
  std::vector<SectionDoc> out;
  for (const auto& r : raw) {
    if (r.depth <= 1 || out.empty()) {
      SectionDoc doc;
      doc.section_id = out.size();
      doc.title = r.title;
      doc.text = r.text;
      out.push_back(std::move(doc));
      continue;
    }
    auto& parent = out.back();
    parent.text += "\n\n";
    parent.text += r.title;
    parent.text += "\n";
    parent.text += r.text;
  }
  return out;
}

/// Finds "Figure 2", "Fig. 3a", "Tables 1 and 2", "Tab. 4", "Figures 1-3".
/// A no-break space may separate the keyword from its number.
/// Every number in a list or range is reported at the keyword's offset.
inline std::vector<RefMention> detect_refs(std::string_view text) {
  static const std::regex kRef(
      R"(\b(Figures?|Figs?\.|Tables?|Tabs?\.|figures?|figs?\.|tables?|tabs?\.)(?:\s|\xC2\xA0)*(\d+)[a-z]?((?:\s*(?:,|and|&|-|–|to)\s*\d+[a-z]?\b)*))");
  static const std::regex kNumber(R"((\d+)[a-z]?)");
  static const std::regex kRangeSep(R"(^\s*(?:-|–|to)\s*$)");

  std::vector<RefMention> out;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kRef);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    auto keyword = detail::to_lower(m[1].str());
    std::string kind = keyword[0] == 'f' ? "figure" : "table";
    auto pos = static_cast<std::size_t>(m.position(0));
    std::vector<std::pair<int, std::string>> nums;  // number, separator before it
    nums.emplace_back(std::stoi(m[2].str()), "");
    std::string tail = m[3].str();
    std::size_t last = 0;
    for (auto nt = std::sregex_iterator(tail.begin(), tail.end(), kNumber);
         nt != std::sregex_iterator(); ++nt) {
      auto sep = tail.substr(last, static_cast<std::size_t>(nt->position(0)) - last);
      nums.emplace_back(std::stoi((*nt)[1].str()), sep);
      last = static_cast<std::size_t>(nt->position(0) + nt->length(0));
    }
    std::vector<int> ids;
    for (std::size_t k = 0; k < nums.size(); ++k) {
      auto [num, sep] = nums[k];
      if (k > 0 && std::regex_match(sep, kRangeSep) && !ids.empty() &&
          num > ids.back() && num - ids.back() <= 50) {
        for (int v = ids.back() + 1; v <= num; ++v) ids.push_back(v);
      } else {
        ids.push_back(num);
      }
    }
    for (int id : ids) out.push_back({pos, kind + "-" + std::to_string(id)});
  }
  return out;
}

namespace detail {

inline const nlohmann::json* field(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

[[noreturn]] inline void malformed(const std::string& path, const std::string& why) {
  throw Error(Errc::kMalformedRecord, path + ": " + why);
}

inline std::string get_string(const nlohmann::json& obj, const char* key,
                              const std::string& path, bool required) {
  const auto* v = field(obj, key);
  if (!v) {
    if (required) malformed(path + key, "missing required field");
    return {};
  }
  if (!v->is_string()) malformed(path + key, "expected string");
  return v->get<std::string>();
}

}  // namespace detail

/// Parses one record of the paper input schema. Sections are merged; when no
/// section parses the abstract (or, failing that, the title) stands in.
inline PaperRecord parse_paper(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    detail::malformed("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) detail::malformed("$", "expected object");

  PaperRecord p;
  p.paper_id = detail::get_string(j, "id", "$.", true);
  if (p.paper_id.empty()) detail::malformed("$.id", "empty id");
  const auto* title = detail::field(j, "title");
  if (title && !title->is_string()) detail::malformed("$.title", "expected string");
  if (title) p.title = title->get<std::string>();
  p.abstract = detail::get_string(j, "abstract", "$.", false);
  p.venue = detail::get_string(j, "venue", "$.", false);

  if (const auto* authors = detail::field(j, "authors")) {
    if (!authors->is_array()) detail::malformed("$.authors", "expected array");
    for (std::size_t i = 0; i < authors->size(); ++i) {
      if (!(*authors)[i].is_string()) {
        detail::malformed("$.authors[" + std::to_string(i) + "]", "expected string");
      }
      p.authors.push_back((*authors)[i].get<std::string>());
    }
  }
  if (const auto* year = detail::field(j, "year")) {
    if (!year->is_number_integer()) detail::malformed("$.year", "expected integer");
    p.year = year->get<int>();
  }
  if (const auto* source = detail::field(j, "source")) {
    if (!source->is_string()) detail::malformed("$.source", "expected string");
    auto s = source->get<std::string>();
    if (s == "arxiv") p.source = Source::kArxiv;
    else if (s == "acl") p.source = Source::kAcl;
    else if (s == "other") p.source = Source::kOther;
    else detail::malformed("$.source", "unknown source '" + s + "'");
  }

  std::vector<RawSection> raw;
  if (const auto* sections = detail::field(j, "sections")) {
    if (!sections->is_array()) detail::malformed("$.sections", "expected array");
    for (std::size_t i = 0; i < sections->size(); ++i) {
      const auto& s = (*sections)[i];
      auto path = "$.sections[" + std::to_string(i) + "].";
      if (!s.is_object()) detail::malformed(path, "expected object");
      RawSection r;
      r.title = detail::get_string(s, "title", path, false);
      r.text = detail::get_string(s, "text", path, false);
      if (const auto* depth = detail::field(s, "depth")) {
        if (!depth->is_number_integer() || depth->get<int>() < 1) {
          detail::malformed(path + "depth", "expected integer >= 1");
        }
        r.depth = depth->get<int>();
      }
      raw.push_back(std::move(r));
    }
  }
  if (const auto* figures = detail::field(j, "figures")) {
    if (!figures->is_array()) detail::malformed("$.figures", "expected array");
    for (std::size_t i = 0; i < figures->size(); ++i) {
      const auto& f = (*figures)[i];
      auto path = "$.figures[" + std::to_string(i) + "].";
      if (!f.is_object()) detail::malformed(path, "expected object");
      p.figures.push_back({detail::get_string(f, "ref_id", path, false),
                           detail::get_string(f, "caption", path, false)});
    }
  }

  if (p.title.empty() && raw.empty()) {
    throw Error(Errc::kEmptyPaper, "record " + p.paper_id + " has no title and no sections");
  }
  p.sections = merge_subsections(raw);
  if (p.sections.empty()) {
    SectionDoc doc;
    doc.title = p.abstract.empty() ? "Title" : "Abstract";
    doc.text = p.abstract.empty() ? p.title : p.abstract;
    p.sections.push_back(std::move(doc));
  }
  return p;
}

/// Inverse of parse_paper for the input schema; merged sections are written
/// at depth 1.
inline nlohmann::json to_input_json(const PaperRecord& p) {
  nlohmann::json j;
  j["id"] = p.paper_id;
  j["title"] = p.title;
  j["abstract"] = p.abstract;
  j["authors"] = p.authors;
  j["venue"] = p.venue;
  j["year"] = p.year;
  j["source"] = std::string(source_name(p.source));
  j["sections"] = nlohmann::json::array();
  for (const auto& s : p.sections) {
    j["sections"].push_back({{"title", s.title}, {"depth", 1}, {"text", s.text}});
  }
  j["figures"] = nlohmann::json::array();
  for (const auto& f : p.figures) {
    j["figures"].push_back({{"ref_id", f.ref_id}, {"caption", f.caption}});
  }
  return j;
}

/// Segments and normalizes every section, detects figure/table references
/// and tags entities.
inline void annotate_paper(PaperRecord& paper, const Stopwords& stopwords,
                           const EntityDictionary& dict) {
  for (std::size_t i = 0; i < paper.sections.size(); ++i) {
    auto& section = paper.sections[i];
    section.section_id = i;
    section.sentences = process_text(section.text, stopwords);
    section.ref_mentions = detect_refs(section.text);
    section.mentions.clear();
    for (const auto& sentence : section.sentences) {
      auto found = tag(sentence, dict, i);
      section.mentions.insert(section.mentions.end(), found.begin(), found.end());
    }
  }
}

/// Reads newline-delimited records. Errors carry the 1-based line number.
inline std::vector<PaperRecord> parse_corpus(std::istream& in) {
  std::vector<PaperRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      out.push_back(parse_paper(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " +
                                std::string(e.what()).substr(errc_name(e.code()).size() + 2));
    }
  }
  return out;
}

/// Full annotated record, including sentences and mentions, as stored in
/// index snapshots.
inline nlohmann::json to_annotated_json(const PaperRecord& p) {
  auto j = to_input_json(p);
  for (std::size_t i = 0; i < p.sections.size(); ++i) {
    const auto& s = p.sections[i];
    auto& out = j["sections"][i];
    out["sentences"] = nlohmann::json::array();
    for (const auto& u : s.sentences) {
      out["sentences"].push_back({{"raw", u.raw}, {"tokens", u.tokens}});
    }
    out["refs"] = nlohmann::json::array();
    for (const auto& r : s.ref_mentions) {
      out["refs"].push_back({r.position, r.ref_id});
    }
    out["mentions"] = nlohmann::json::array();
    for (const auto& m : s.mentions) {
      out["mentions"].push_back({std::string(kind_name(m.entity.kind)),
                                 m.entity.canonical, m.sentence_id, m.position,
                                 m.surface});
    }
  }
  return j;
}

inline PaperRecord from_annotated_json(const nlohmann::json& j) {
  auto p = parse_paper(j.dump());
  const auto& sections = j.at("sections");
  if (sections.size() != p.sections.size()) {
    throw Error(Errc::kMalformedSnapshot, "section count mismatch for " + p.paper_id);
  }
  try {
    for (std::size_t i = 0; i < sections.size(); ++i) {
      auto& doc = p.sections[i];
      doc.section_id = i;
      const auto& s = sections[i];
      for (const auto& u : s.at("sentences")) {
        SentenceUnit unit;
        unit.id = doc.sentences.size();
        unit.raw = u.at("raw").get<std::string>();
        unit.tokens = u.at("tokens").get<std::vector<std::string>>();
        unit.unigrams = bag_of_ngrams(unit.tokens, 1);
        unit.bigrams = bag_of_ngrams(unit.tokens, 2);
        unit.token_count = unit.tokens.size();
        doc.sentences.push_back(std::move(unit));
      }
      for (const auto& r : s.at("refs")) {
        doc.ref_mentions.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::string>()});
      }
      for (const auto& m : s.at("mentions")) {
        auto kind = parse_kind(m.at(0).get<std::string>());
        if (!kind) throw Error(Errc::kMalformedSnapshot, "bad entity kind");
        doc.mentions.push_back(EntityMention{{*kind, m.at(1).get<std::string>()},
                                             i,
                                             m.at(2).get<std::size_t>(),
                                             m.at(3).get<std::size_t>(),
                                             m.at(4).get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedSnapshot, p.paper_id + ": " + e.what());
  }
  return p;
}

struct DedupeConfig {
  double title_threshold = 0.9;
  double author_threshold = 0.5;
};

namespace detail {

inline std::vector<std::string> title_tokens(const std::string& title) {
  static const Stopwords kNone;
  auto tokens = normalize(title, kNone);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

inline std::vector<std::string> author_keys(const std::vector<std::string>& authors) {
  static const Stopwords kNone;
  std::vector<std::string> out;
  for (const auto& a : authors) {
    auto key = join_tokens(normalize(a, kNone));
    if (!key.empty()) out.push_back(std::move(key));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Jaccard of two sorted, unique vectors; two empty sets count as identical.
inline double sorted_jaccard(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0, i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    if (a[i] == b[k]) {
      ++common;
      ++i;
      ++k;
    } else if (a[i] < b[k]) {
      ++i;
    } else {
      ++k;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

inline int source_rank(Source s) {
  switch (s) {
    case Source::kAcl: return 0;
    case Source::kArxiv: return 1;
    case Source::kOther: return 2;
  }
  return 2;
}

}  // namespace detail

/// Two records are duplicates when both the title-token and the author-name
/// Jaccard similarities reach their thresholds. Duplicates are clustered
/// transitively; each cluster keeps its ACL copy, else the smallest paper_id.
/// The output is sorted by paper_id and does not depend on input order.
inline std::vector<PaperRecord> dedupe(std::vector<PaperRecord> corpus,
                                       const DedupeConfig& cfg = {}) {
  const std::size_t n = corpus.size();
  std::vector<std::vector<std::string>> titles(n), authors(n);
  for (std::size_t i = 0; i < n; ++i) {
    titles[i] = detail::title_tokens(corpus[i].title);
    authors[i] = detail::author_keys(corpus[i].authors);
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  // Prefix filter: sets with Jaccard >= t share a token among the first
  // |x| - ceil(t|x|) + 1 tokens of each in a common order. Empty titles
  // only pair with each other.
  std::map<std::string, std::vector<std::size_t>> prefix_index;
  std::vector<std::size_t> empty_titles;
  std::set<std::pair<std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = titles[i];
    if (t.empty()) {
      for (auto other : empty_titles) candidates.emplace(other, i);
      empty_titles.push_back(i);
      continue;
    }
    auto keep = static_cast<std::size_t>(std::ceil(cfg.title_threshold * t.size() - 1e-9));
    std::size_t prefix = t.size() - std::min(keep, t.size()) + 1;
    prefix = std::min(prefix, t.size());
    for (std::size_t k = 0; k < prefix; ++k) {
      auto& bucket = prefix_index[t[k]];
      for (auto other : bucket) candidates.emplace(other, i);
      bucket.push_back(i);
    }
  }
  for (auto [a, b] : candidates) {
    if (detail::sorted_jaccard(titles[a], titles[b]) + 1e-12 >= cfg.title_threshold &&
        detail::sorted_jaccard(authors[a], authors[b]) + 1e-12 >= cfg.author_threshold) {
      parent[find(a)] = find(b);
    }
  }

  std::map<std::size_t, std::size_t> winner;  // root -> index
  auto better = [&](std::size_t a, std::size_t b) {
    auto ra = detail::source_rank(corpus[a].source);
    auto rb = detail::source_rank(corpus[b].source);
    if (ra != rb) return ra < rb;
    return corpus[a].paper_id < corpus[b].paper_id;
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto root = find(i);
    auto it = winner.find(root);
    if (it == winner.end()) winner.emplace(root, i);
    else if (better(i, it->second)) it->second = i;
  }
  std::vector<PaperRecord> out;
  out.reserve(winner.size());
  for (auto [_, idx] : winner) out.push_back(std::move(corpus[idx]));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.paper_id < b.paper_id;
  });
  return out;
}

}  // namespace scisumm
