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

// The five summary-quality objectives and their product. Two forms are
// provided: map-based functions over pooled bags, and SectionModel, an
// interned view of one candidate pool that scores subsets without
// allocating.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "scisumm/entities.hpp"
#include "scisumm/ingest.hpp"
#include "scisumm/query.hpp"
#include "scisumm/textproc.hpp"

namespace scisumm {

inline constexpr double kObjectiveFloor = 1e-4;

struct ObjectiveBreakdown {
  double query_saliency = 0.0;
  double entity_coverage = 0.0;
  double diversity = 0.0;
  double text_coverage = 0.0;
  double length = 0.0;
  double product = 0.0;

  bool operator==(const ObjectiveBreakdown&) const = default;
};

inline double clamp_objective(double v) {
  return std::clamp(v, kObjectiveFloor, 1.0);
}

/// Floors each component at kObjectiveFloor, caps at 1, multiplies.
inline ObjectiveBreakdown combine(double saliency, double entities, double diversity,
                                  double coverage, double length) {
  ObjectiveBreakdown b;
  b.query_saliency = clamp_objective(saliency);
  b.entity_coverage = clamp_objective(entities);
  b.diversity = clamp_objective(diversity);
  b.text_coverage = clamp_objective(coverage);
  b.length = clamp_objective(length);
  b.product = b.query_saliency * b.entity_coverage * b.diversity * b.text_coverage * b.length;
  return b;
}

using SentenceRefs = std::vector<const SentenceUnit*>;

/// Pooled n-gram counts over several sentences.
inline std::map<std::string, double> pooled_counts(const SentenceRefs& sentences, int n) {
  std::map<std::string, double> out;
  for (const auto* s : sentences) {
    const auto& t = s->tokens;
    for (std::size_t i = 0; i + n <= t.size(); ++i) {
      out[n == 1 ? t[i] : t[i] + " " + t[i + 1]] += 1.0;
    }
  }
  return out;
}

/// Cosine similarity; zero when either vector is empty or all-zero.
inline double cosine(const std::map<std::string, double>& a,
                     const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (const auto& [_, v] : b) nb += v * v;
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

/// Shannon entropy divided by log of the number of distinct terms; zero for
/// fewer than two terms.
inline double normalized_entropy(const std::map<std::string, double>& bag) {
  double total = 0.0;
  std::size_t support = 0;
  for (const auto& [_, v] : bag) {
    if (v > 0.0) {
      total += v;
      ++support;
    }
  }
  if (support < 2) return 0.0;
  double h = 0.0;
  for (const auto& [_, v] : bag) {
    if (v <= 0.0) continue;
    double p = v / total;
    h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(support));
}

inline double query_saliency(const SentenceRefs& summary, const QueryProfile& profile) {
  return cosine(pooled_counts(summary, 1), profile.terms);
}

/// Jaccard similarity of the summary's entities with E_Q. An empty E_Q
/// imposes nothing and scores 1.
inline double entity_coverage(const EntitySet& summary, const EntitySet& query) {
  if (query.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& e : summary) common += query.count(e);
  return static_cast<double>(common) /
         static_cast<double>(summary.size() + query.size() - common);
}

inline double diversity(const SentenceRefs& summary) {
  return normalized_entropy(pooled_counts(summary, 1));
}

inline double text_coverage(const SentenceRefs& summary, const SectionDoc& section) {
  SentenceRefs all;
  for (const auto& s : section.sentences) all.push_back(&s);
  return cosine(pooled_counts(summary, 2), pooled_counts(all, 2));
}

/// Mean token count of the summary over the longest sentence of the section.
inline double length_objective(const SentenceRefs& summary, const SectionDoc& section) {
  if (summary.empty()) return 0.0;
  std::size_t longest = 0;
  for (const auto& s : section.sentences) longest = std::max(longest, s.token_count);
  if (longest == 0) return 0.0;
  double sum = 0.0;
  for (const auto* s : summary) sum += static_cast<double>(s->token_count);
  return sum / static_cast<double>(summary.size()) / static_cast<double>(longest);
}

inline EntitySet summary_entities(std::span<const std::size_t> ids, const SectionDoc& section) {
  EntitySet out;
  for (const auto& m : section.mentions) {
    if (std::find(ids.begin(), ids.end(), m.sentence_id) != ids.end()) out.insert(m.entity);
  }
  return out;
}

/// Interned candidate pool for fast repeated scoring of subsets.
class SectionModel {
 public:
  SectionModel(const SectionDoc& section, const QueryProfile& profile) {
    std::unordered_map<std::string, std::uint32_t> uni_ids, bi_ids;
    auto intern = [](auto& table, const std::string& key) {
      auto [it, _] = table.emplace(key, static_cast<std::uint32_t>(table.size()));
      return it->second;
    };
    sentences_.resize(section.sentences.size());
    for (std::size_t i = 0; i < section.sentences.size(); ++i) {
      const auto& s = section.sentences[i];
      auto& out = sentences_[i];
      out.token_count = s.token_count;
      longest_ = std::max(longest_, s.token_count);
      std::map<std::uint32_t, std::uint32_t> uni, bi;
      for (std::size_t k = 0; k < s.tokens.size(); ++k) {
        ++uni[intern(uni_ids, s.tokens[k])];
        if (k + 1 < s.tokens.size()) ++bi[intern(bi_ids, s.tokens[k] + " " + s.tokens[k + 1])];
      }
      out.unigrams.assign(uni.begin(), uni.end());
      out.bigrams.assign(bi.begin(), bi.end());
    }

    section_bigrams_.assign(bi_ids.size(), 0.0);
    for (const auto& s : sentences_) {
      for (auto [id, c] : s.bigrams) section_bigrams_[id] += c;
    }
    for (double v : section_bigrams_) section_bigram_norm_ += v * v;
    section_bigram_norm_ = std::sqrt(section_bigram_norm_);

    profile_weights_.assign(uni_ids.size(), 0.0);
    for (const auto& [term, w] : profile.terms) {
      profile_norm_ += w * w;
      auto it = uni_ids.find(term);
      if (it != uni_ids.end()) profile_weights_[it->second] = w;
    }
    profile_norm_ = std::sqrt(profile_norm_);

    std::map<EntityKey, std::uint32_t> entity_ids;
    for (const auto& e : profile.entities) {
      entity_ids.emplace(e, static_cast<std::uint32_t>(entity_ids.size()));
    }
    query_entities_ = profile.entities.size();
    for (const auto& m : section.mentions) {
      if (m.sentence_id >= sentences_.size()) continue;
      auto [it, _] = entity_ids.emplace(m.entity, static_cast<std::uint32_t>(entity_ids.size()));
      auto& list = sentences_[m.sentence_id].entities;
      if (std::find(list.begin(), list.end(), it->second) == list.end()) {
        list.push_back(it->second);
      }
    }
    entity_space_ = entity_ids.size();
    unigram_space_ = uni_ids.size();
    bigram_space_ = bi_ids.size();
  }

  std::size_t size() const { return sentences_.size(); }

  /// Reusable buffers; one per scoring thread.
  struct Scratch {
    std::vector<double> uni, bi;
    std::vector<std::uint32_t> uni_touched, bi_touched;
    std::vector<char> entity_seen;
    std::vector<std::uint32_t> entity_touched;
  };

  Scratch make_scratch() const {
    Scratch s;
    s.uni.assign(unigram_space_, 0.0);
    s.bi.assign(bigram_space_, 0.0);
    s.entity_seen.assign(entity_space_, 0);
    return s;
  }

  ObjectiveBreakdown score(std::span<const std::size_t> ids, Scratch& scratch) const {
    double token_sum = 0.0;
    for (auto id : ids) {
      const auto& s = sentences_[id];
      token_sum += static_cast<double>(s.token_count);
      for (auto [u, c] : s.unigrams) {
        if (scratch.uni[u] == 0.0) scratch.uni_touched.push_back(u);
        scratch.uni[u] += c;
      }
      for (auto [b, c] : s.bigrams) {
        if (scratch.bi[b] == 0.0) scratch.bi_touched.push_back(b);
        scratch.bi[b] += c;
      }
      for (auto e : s.entities) {
        if (!scratch.entity_seen[e]) {
          scratch.entity_seen[e] = 1;
          scratch.entity_touched.push_back(e);
        }
      }
    }

    double dot = 0.0, norm = 0.0, total = 0.0;
    for (auto u : scratch.uni_touched) {
      double c = scratch.uni[u];
      dot += c * profile_weights_[u];
      norm += c * c;
      total += c;
    }
    double saliency = (norm > 0.0 && profile_norm_ > 0.0)
                          ? dot / (std::sqrt(norm) * profile_norm_)
                          : 0.0;

    double div = 0.0;
    if (scratch.uni_touched.size() >= 2) {
      double h = 0.0;
      for (auto u : scratch.uni_touched) {
        double p = scratch.uni[u] / total;
        h -= p * std::log(p);
      }
      div = h / std::log(static_cast<double>(scratch.uni_touched.size()));
    }

    double bdot = 0.0, bnorm = 0.0;
    for (auto b : scratch.bi_touched) {
      double c = scratch.bi[b];
      bdot += c * section_bigrams_[b];
      bnorm += c * c;
    }
    double coverage = (bnorm > 0.0 && section_bigram_norm_ > 0.0)
                          ? bdot / (std::sqrt(bnorm) * section_bigram_norm_)
                          : 0.0;

    double ent = 1.0;
    if (query_entities_ > 0) {
      // Query entities hold ids [0, query_entities_).
      std::size_t common = 0;
      for (auto e : scratch.entity_touched) common += e < query_entities_ ? 1 : 0;
      ent = static_cast<double>(common) /
            static_cast<double>(scratch.entity_touched.size() + query_entities_ - common);
    }

    double len = (ids.empty() || longest_ == 0)
                     ? 0.0
                     : token_sum / static_cast<double>(ids.size()) / static_cast<double>(longest_);

    for (auto u : scratch.uni_touched) scratch.uni[u] = 0.0;
    for (auto b : scratch.bi_touched) scratch.bi[b] = 0.0;
    for (auto e : scratch.entity_touched) scratch.entity_seen[e] = 0;
    scratch.uni_touched.clear();
    scratch.bi_touched.clear();
    scratch.entity_touched.clear();

    return combine(saliency, ent, div, coverage, len);
  }

  ObjectiveBreakdown score(std::span<const std::size_t> ids) const {
    auto scratch = make_scratch();
    return score(ids, scratch);
  }

 private:
  struct Sentence {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> unigrams, bigrams;
    std::vector<std::uint32_t> entities;
    std::size_t token_count = 0;
  };

  std::vector<Sentence> sentences_;
  std::vector<double> section_bigrams_;
  double section_bigram_norm_ = 0.0;
  std::vector<double> profile_weights_;
  double profile_norm_ = 0.0;
  std::size_t query_entities_ = 0;
  std::size_t entity_space_ = 0;
  std::size_t unigram_space_ = 0;
  std::size_t bigram_space_ = 0;
  std::size_t longest_ = 0;
};

/// Scores a subset of a section's sentences. Ids must be valid for the
/// section.
inline ObjectiveBreakdown score_summary(std::span<const std::size_t> ids,
                                        const SectionDoc& section,
                                        const QueryProfile& profile) {
  for (auto id : ids) {
    if (id >= section.sentences.size()) {
      throw Error(Errc::kInvalidArgument, "sentence id " + std::to_string(id) + " out of range");
    }
  }
  return SectionModel(section, profile).score(ids);
}

}  // namespace scisumm
