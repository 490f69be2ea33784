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

// In-memory inverted index over title, abstract and section text with
// metadata and entity facets. BM25 scoring with per-field weights.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scisumm/entities.hpp"
#include "scisumm/errors.hpp"
#include "scisumm/ingest.hpp"
#include "scisumm/textproc.hpp"

namespace scisumm {

enum class Field { kTitle = 0, kAbstract = 1, kSection = 2 };
inline constexpr std::size_t kNumFields = 3;

inline std::string_view field_name(Field f) {
  switch (f) {
    case Field::kTitle: return "title";
    case Field::kAbstract: return "abstract";
    case Field::kSection: return "section";
  }
  return "section";
}

struct Posting {
  std::size_t doc = 0;  // ordinal in paper_id order once frozen
  Field field = Field::kTitle;
  std::size_t tf = 0;

  bool operator==(const Posting&) const = default;
};

struct Bm25Config {
  double k1 = 1.2;
  double b = 0.75;
  std::array<double, kNumFields> field_weights{3.0, 2.0, 1.0};

  bool operator==(const Bm25Config&) const = default;
};

struct SearchFilter {
  std::optional<std::string> venue;
  std::optional<std::pair<int, int>> year_range;  // inclusive
  std::optional<std::string> author;
  EntitySet entities;

  bool empty() const {
    return !venue && !year_range && !author && entities.empty();
  }
};

struct SearchResult {
  std::string paper_id;
  double score = 0.0;
  std::set<Field> matched_fields;
  std::string snippet;

  bool operator==(const SearchResult&) const = default;
};

using FacetCounts = std::map<EntityKey, std::size_t>;

class Index {
 public:
  static constexpr int kFormatVersion = 1;

  Index() : stopwords_(Stopwords::builtin()) {}
  Index(Stopwords stopwords, EntityDictionary dict, Bm25Config cfg = {})
      : cfg_(cfg), stopwords_(std::move(stopwords)), dict_(std::move(dict)) {}

  /// Adds an annotated paper. Only valid before freeze().
  void index_paper(PaperRecord record) {
    if (frozen_) throw Error(Errc::kInvalidArgument, "index is frozen");
    if (by_id_.count(record.paper_id) != 0) {
      throw Error(Errc::kDuplicateId, record.paper_id);
    }
    by_id_.emplace(record.paper_id, docs_.size());
    Doc doc;
    doc.paper = std::move(record);
    docs_.push_back(std::move(doc));
  }

  /// Assigns ordinals in paper_id order and builds postings and facets.
  void freeze() {
    std::sort(docs_.begin(), docs_.end(), [](const Doc& a, const Doc& b) {
      return a.paper.paper_id < b.paper.paper_id;
    });
    by_id_.clear();
    postings_.clear();
    avg_len_.fill(0.0);
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      auto& doc = docs_[d];
      by_id_.emplace(doc.paper.paper_id, d);
      std::array<std::map<std::string, std::size_t>, kNumFields> counts;
      for (auto& t : normalize(doc.paper.title, stopwords_)) ++counts[0][t];
      for (auto& t : normalize(doc.paper.abstract, stopwords_)) ++counts[1][t];
      for (const auto& s : doc.paper.sections) {
        for (const auto& u : s.sentences) {
          for (const auto& t : u.tokens) ++counts[2][t];
        }
      }
      doc.term_counts.clear();
      doc.length.fill(0);
      for (std::size_t f = 0; f < kNumFields; ++f) {
        for (const auto& [term, tf] : counts[f]) {
          postings_[term].push_back(Posting{d, static_cast<Field>(f), tf});
          doc.term_counts[term] += tf;
          doc.length[f] += tf;
        }
        avg_len_[f] += static_cast<double>(doc.length[f]);
      }
      doc.total_terms = doc.length[0] + doc.length[1] + doc.length[2];
      doc.entities = doc.paper.entities();
    }
    if (!docs_.empty()) {
      for (auto& a : avg_len_) a /= static_cast<double>(docs_.size());
    }
    frozen_ = true;
  }

  bool frozen() const { return frozen_; }
  std::size_t size() const { return docs_.size(); }
  std::size_t term_count() const { return postings_.size(); }
  const Bm25Config& config() const { return cfg_; }
  const Stopwords& stopwords() const { return stopwords_; }
  const EntityDictionary& dictionary() const { return dict_; }

  const PaperRecord* find(const std::string& paper_id) const {
    auto it = by_id_.find(paper_id);
    return it == by_id_.end() ? nullptr : &docs_[it->second].paper;
  }
  const PaperRecord& paper(std::size_t doc) const { return docs_.at(doc).paper; }

  const std::vector<Posting>* postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
  }

  /// Number of papers containing the term in any field.
  std::size_t document_frequency(const std::string& term) const {
    const auto* list = postings(term);
    if (!list) return 0;
    std::size_t df = 0;
    std::size_t last = static_cast<std::size_t>(-1);
    for (const auto& p : *list) {
      if (p.doc != last) ++df;
      last = p.doc;
    }
    return df;
  }

  /// Term counts over all fields of one paper.
  const std::map<std::string, std::size_t>& term_counts(std::size_t doc) const {
    return docs_.at(doc).term_counts;
  }
  std::size_t total_terms(std::size_t doc) const { return docs_.at(doc).total_terms; }
  std::optional<std::size_t> ordinal(const std::string& paper_id) const {
    auto it = by_id_.find(paper_id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  double idf(const std::string& term) const {
    auto df = static_cast<double>(document_frequency(term));
    auto n = static_cast<double>(docs_.size());
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  }

  bool matches(std::size_t doc, const SearchFilter& filter) const {
    const auto& p = docs_[doc].paper;
    if (filter.venue && detail::to_lower(*filter.venue) != detail::to_lower(p.venue)) {
      return false;
    }
    if (filter.year_range &&
        (p.year < filter.year_range->first || p.year > filter.year_range->second)) {
      return false;
    }
    if (filter.author) {
      auto wanted = detail::to_lower(*filter.author);
      bool any = std::any_of(p.authors.begin(), p.authors.end(), [&](const auto& a) {
        return detail::to_lower(a) == wanted;
      });
      if (!any) return false;
    }
    for (const auto& e : filter.entities) {
      if (docs_[doc].entities.count(e) == 0) return false;
    }
    return true;
  }

  /// Ranked retrieval. With query tokens: BM25 over matching papers, filter as
  /// a hard constraint, score descending then paper_id ascending. Without:
  /// every filter-matching paper in paper_id order with score 0.
  std::vector<SearchResult> search(const std::vector<std::string>& query_tokens,
                                   const SearchFilter& filter, std::size_t k) const {
    require_frozen();
    std::set<std::string> terms(query_tokens.begin(), query_tokens.end());
    if (terms.empty() && filter.empty()) {
      throw Error(Errc::kEmptyRequest, "search needs a query or a filter");
    }
    std::vector<SearchResult> out;
    if (k == 0) return out;

    if (terms.empty()) {
      for (std::size_t d = 0; d < docs_.size() && out.size() < k; ++d) {
        if (!matches(d, filter)) continue;
        out.push_back(SearchResult{docs_[d].paper.paper_id, 0.0, {},
                                   snippet(d, terms)});
      }
      return out;
    }

    std::map<std::size_t, std::pair<double, std::set<Field>>> acc;
    for (const auto& term : terms) {
      const auto* list = postings(term);
      if (!list) continue;
      double w_idf = idf(term);
      for (const auto& p : *list) {
        auto f = static_cast<std::size_t>(p.field);
        double tf = static_cast<double>(p.tf);
        double norm = avg_len_[f] > 0
                          ? 1.0 - cfg_.b + cfg_.b * docs_[p.doc].length[f] / avg_len_[f]
                          : 1.0;
        double s = cfg_.field_weights[f] * w_idf * tf * (cfg_.k1 + 1.0) /
                   (tf + cfg_.k1 * norm);
        auto& slot = acc[p.doc];
        slot.first += s;
        slot.second.insert(p.field);
      }
    }
    std::vector<std::pair<std::size_t, double>> ranked;
    for (const auto& [doc, entry] : acc) {
      if (entry.first > 0.0 && matches(doc, filter)) ranked.emplace_back(doc, entry.first);
    }
    // Ordinals follow paper_id order, so the tie-break is by ordinal.
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    for (auto [doc, score] : ranked) {
      out.push_back(SearchResult{docs_[doc].paper.paper_id, score, acc[doc].second,
                                 snippet(doc, terms)});
    }
    return out;
  }

  std::vector<std::pair<std::string, double>> top_docs(
      const std::vector<std::string>& query_tokens, std::size_t k) const {
    std::vector<std::pair<std::string, double>> out;
    for (auto& r : search(query_tokens, SearchFilter{}, k)) {
      out.emplace_back(std::move(r.paper_id), r.score);
    }
    return out;
  }

  /// Distinct papers per entity among the papers matching the filter.
  FacetCounts facet_counts(const SearchFilter& filter) const {
    FacetCounts out;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      if (!matches(d, filter)) continue;
      for (const auto& e : docs_[d].entities) ++out[e];
    }
    return out;
  }

  // Snapshot layout, one record per line:
  //   SCISUMM-INDEX <version> <paper count> <term count>
  //   {"bm25": ..., "stopwords": [...], "dictionary": [...]}
  //   <paper count> annotated paper records (JSON)
  //   <term count> posting lines: term <TAB> doc:field:tf ...
  void save(std::ostream& out) const {
    require_frozen();
    out << "SCISUMM-INDEX " << kFormatVersion << ' ' << docs_.size() << ' '
        << postings_.size() << '\n';
    nlohmann::json meta;
    meta["bm25"] = {{"k1", cfg_.k1}, {"b", cfg_.b}, {"field_weights", cfg_.field_weights}};
    std::vector<std::string> words(stopwords_.words().begin(), stopwords_.words().end());
    std::sort(words.begin(), words.end());
    meta["stopwords"] = words;
    meta["dictionary"] = nlohmann::json::array();
    for (const auto& [key, entity] : dict_.entities()) {
      meta["dictionary"].push_back(
          {std::string(kind_name(key.kind)), key.canonical, entity.aliases});
    }
    out << meta.dump() << '\n';
    for (const auto& doc : docs_) out << to_annotated_json(doc.paper).dump() << '\n';
    for (const auto& [term, list] : postings_) {
      out << term << '\t';
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out << ' ';
        out << list[i].doc << ':' << static_cast<int>(list[i].field) << ':' << list[i].tf;
      }
      out << '\n';
    }
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::kInvalidArgument, "cannot write " + path);
    save(out);
  }

  /// Rebuilds from the stored records and checks the stored postings against
  /// the rebuilt ones.
  static Index load(std::istream& in) {
    auto fail = [](const std::string& why) -> void {
      throw Error(Errc::kMalformedSnapshot, why);
    };
    std::string line;
    if (!std::getline(in, line)) fail("empty snapshot");
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    std::size_t n_papers = 0, n_terms = 0;
    header >> magic >> version >> n_papers >> n_terms;
    if (magic != "SCISUMM-INDEX" || !header) fail("bad header");
    if (version != kFormatVersion) fail("unsupported version " + std::to_string(version));

    if (!std::getline(in, line)) fail("missing metadata line");
    Index index;
    try {
      auto meta = nlohmann::json::parse(line);
      const auto& bm = meta.at("bm25");
      index.cfg_.k1 = bm.at("k1").get<double>();
      index.cfg_.b = bm.at("b").get<double>();
      index.cfg_.field_weights = bm.at("field_weights").get<std::array<double, kNumFields>>();
      auto words = meta.at("stopwords").get<std::vector<std::string>>();
      index.stopwords_ = Stopwords({words.begin(), words.end()});
      for (const auto& e : meta.at("dictionary")) {
        auto kind = parse_kind(e.at(0).get<std::string>());
        if (!kind) fail("bad entity kind in dictionary");
        index.dict_.add(*kind, e.at(1).get<std::string>(),
                        e.at(2).get<std::set<std::string>>());
      }
      index.dict_.build();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("bad metadata: ") + e.what());
    }
    for (std::size_t i = 0; i < n_papers; ++i) {
      if (!std::getline(in, line)) fail("truncated paper records");
      try {
        index.index_paper(from_annotated_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        fail(std::string("bad paper record: ") + e.what());
      }
    }
    index.freeze();
    if (index.postings_.size() != n_terms) fail("term count mismatch");
    for (std::size_t i = 0; i < n_terms; ++i) {
      if (!std::getline(in, line)) fail("truncated posting lists");
      auto tab = line.find('\t');
      if (tab == std::string::npos) fail("bad posting line");
      auto term = line.substr(0, tab);
      std::vector<Posting> list;
      std::istringstream items(line.substr(tab + 1));
      std::string item;
      while (items >> item) {
        Posting p;
        int field = 0;
        char c1 = 0, c2 = 0;
        std::istringstream one(item);
        if (!(one >> p.doc >> c1 >> field >> c2 >> p.tf) || c1 != ':' || c2 != ':' ||
            field < 0 || field >= static_cast<int>(kNumFields)) {
          fail("bad posting '" + item + "'");
        }
        p.field = static_cast<Field>(field);
        list.push_back(p);
      }
      const auto* rebuilt = index.postings(term);
      if (!rebuilt || *rebuilt != list) fail("posting list mismatch for '" + term + "'");
    }
    return index;
  }

  static Index load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + path);
    return load(in);
  }

  bool operator==(const Index& other) const {
    if (cfg_ != other.cfg_ || docs_.size() != other.docs_.size() ||
        postings_ != other.postings_ || stopwords_.words() != other.stopwords_.words()) {
      return false;
    }
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      if (!(docs_[d].paper == other.docs_[d].paper)) return false;
    }
    if (dict_.entities().size() != other.dict_.entities().size()) return false;
    auto a = dict_.entities().begin();
    auto b = other.dict_.entities().begin();
    for (; a != dict_.entities().end(); ++a, ++b) {
      if (a->first != b->first || a->second.aliases != b->second.aliases) return false;
    }
    return true;
  }

 private:
  struct Doc {
    PaperRecord paper;
    std::map<std::string, std::size_t> term_counts;
    std::array<std::size_t, kNumFields> length{0, 0, 0};
    std::size_t total_terms = 0;
    EntitySet entities;
  };

  void require_frozen() const {
    if (!frozen_) throw Error(Errc::kInvalidArgument, "index is not frozen");
  }

  std::string snippet(std::size_t doc, const std::set<std::string>& terms) const {
    const auto& p = docs_[doc].paper;
    if (!terms.empty()) {
      for (const auto& s : p.sections) {
        for (const auto& u : s.sentences) {
          for (const auto& t : u.tokens) {
            if (terms.count(t)) return u.raw;
          }
        }
      }
    }
    const std::string& text = p.abstract.empty() ? p.title : p.abstract;
    if (text.size() <= 200) return text;
    auto cut = text.rfind(' ', 200);
    return text.substr(0, cut == std::string::npos ? 200 : cut) + " ...";
  }

  Bm25Config cfg_;
  Stopwords stopwords_;
  EntityDictionary dict_;
  std::vector<Doc> docs_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<Posting>> postings_;
  std::array<double, kNumFields> avg_len_{0.0, 0.0, 0.0};
  bool frozen_ = false;
};

}  // namespace scisumm
