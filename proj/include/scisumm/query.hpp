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

// Query handling: pseudo-relevance-feedback expansion for short queries,
// fixed-point term weighting for verbose ones, and a keyphrase surrogate when
// only filters are given.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scisumm/entities.hpp"
#include "scisumm/errors.hpp"
#include "scisumm/index.hpp"
#include "scisumm/textproc.hpp"

namespace scisumm {

enum class ProfileOrigin { kExpanded, kVerboseWeighted, kKeyphraseSurrogate };

inline std::string_view origin_name(ProfileOrigin o) {
  switch (o) {
    case ProfileOrigin::kExpanded: return "expanded";
    case ProfileOrigin::kVerboseWeighted: return "verbose_weighted";
    case ProfileOrigin::kKeyphraseSurrogate: return "keyphrase_surrogate";
  }
  return "expanded";
}

/// Weighted query terms (L1-normalized) plus the query's entity set.
struct QueryProfile {
  std::map<std::string, double> terms;
  EntitySet entities;
  ProfileOrigin origin = ProfileOrigin::kExpanded;

  bool operator==(const QueryProfile&) const = default;
};

struct QueryConfig {
  std::size_t top_docs = 10;
  std::size_t profile_size = 100;
  std::size_t verbosity_threshold = 5;
  std::size_t keyphrase_count = 15;
  double fixedpoint_tol = 1e-6;
  std::size_t fixedpoint_max_iters = 50;
  // Share of the expanded profile's mass kept on the original query terms.
  double original_weight = 0.5;
};

namespace detail {

inline void l1_normalize(std::map<std::string, double>& w) {
  double total = 0.0;
  for (const auto& [_, v] : w) total += v;
  if (total <= 0.0) return;
  for (auto& [_, v] : w) v /= total;
}

}  // namespace detail

/// Expands a short query with terms mined from the top-ranked papers. Each
/// candidate term scores sum_d relfreq(term, d) * score(d); the original
/// tokens are always kept and the rest is filled with the best candidates up
/// to cfg.profile_size terms. Weights mix the original query distribution and
/// the feedback distribution, then are L1-normalized. When nothing matches,
/// the profile is the normalized original query.
inline QueryProfile expand_query(const std::vector<std::string>& tokens,
                                 const Index& index, const QueryConfig& cfg = {}) {
  QueryProfile profile;
  profile.origin = ProfileOrigin::kExpanded;
  if (tokens.empty()) return profile;
  auto original = bag_of_ngrams(tokens, 1).entries;

  auto top = index.top_docs(tokens, cfg.top_docs);
  if (top.empty()) {
    profile.terms = std::move(original);
    return profile;
  }

  std::map<std::string, double> feedback;
  for (const auto& [paper_id, score] : top) {
    auto doc = *index.ordinal(paper_id);
    auto total = static_cast<double>(index.total_terms(doc));
    if (total == 0.0) continue;
    for (const auto& [term, count] : index.term_counts(doc)) {
      feedback[term] += static_cast<double>(count) / total * score;
    }
  }

  std::vector<std::pair<std::string, double>> candidates;
  for (const auto& [term, score] : feedback) {
    if (!original.count(term)) candidates.emplace_back(term, score);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::size_t room = cfg.profile_size > original.size() ? cfg.profile_size - original.size() : 0;
  if (candidates.size() > room) candidates.resize(room);

  std::map<std::string, double> chosen_feedback;
  for (const auto& [term, _] : original) chosen_feedback[term] = feedback.count(term) ? feedback[term] : 0.0;
  for (const auto& [term, score] : candidates) chosen_feedback[term] = score;
  detail::l1_normalize(chosen_feedback);

  for (const auto& [term, fb] : chosen_feedback) {
    double q = original.count(term) ? original.at(term) : 0.0;
    profile.terms[term] = cfg.original_weight * q + (1.0 - cfg.original_weight) * fb;
  }
  detail::l1_normalize(profile.terms);
  return profile;
}

/// Mutual-reinforcement weighting of a verbose query's terms:
///   importance(s) = sum_t w(t) * relfreq(t, s)
///   w'(t)         = sum_s importance(s) * relfreq(t, s)
/// both renormalized each round, starting from a uniform `initial` value,
/// until the largest weight change drops below the tolerance.
inline QueryProfile weight_verbose(const std::vector<std::vector<std::string>>& sentences,
                                   const QueryConfig& cfg = {}, double initial = 1.0) {
  QueryProfile profile;
  profile.origin = ProfileOrigin::kVerboseWeighted;

  std::vector<std::map<std::string, double>> bags;
  std::map<std::string, double> w;
  for (const auto& s : sentences) {
    auto bag = bag_of_ngrams(s, 1);
    if (bag.empty()) continue;
    for (const auto& [t, _] : bag.entries) w[t] = initial;
    bags.push_back(std::move(bag.entries));
  }
  if (w.empty()) return profile;
  detail::l1_normalize(w);

  for (std::size_t iter = 0; iter < cfg.fixedpoint_max_iters; ++iter) {
    std::vector<double> importance(bags.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < bags.size(); ++s) {
      for (const auto& [t, f] : bags[s]) importance[s] += w[t] * f;
      total += importance[s];
    }
    if (total > 0.0) {
      for (auto& v : importance) v /= total;
    }
    std::map<std::string, double> next;
    for (std::size_t s = 0; s < bags.size(); ++s) {
      for (const auto& [t, f] : bags[s]) next[t] += importance[s] * f;
    }
    detail::l1_normalize(next);
    double delta = 0.0;
    for (const auto& [t, v] : next) delta = std::max(delta, std::abs(v - w[t]));
    w = std::move(next);
    if (delta < cfg.fixedpoint_tol) break;
  }
  profile.terms = std::move(w);
  return profile;
}

/// Top tf-idf unigrams of an indexed paper, all with the same weight.
inline QueryProfile keyphrase_surrogate(const std::string& paper_id, const Index& index,
                                        const QueryConfig& cfg = {}) {
  auto doc = index.ordinal(paper_id);
  if (!doc) throw Error(Errc::kUnknownPaper, paper_id);
  QueryProfile profile;
  profile.origin = ProfileOrigin::kKeyphraseSurrogate;

  auto n = static_cast<double>(index.size());
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& [term, tf] : index.term_counts(*doc)) {
    auto df = static_cast<double>(index.document_frequency(term));
    scored.emplace_back(term, static_cast<double>(tf) * std::log(1.0 + n / df));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > cfg.keyphrase_count) scored.resize(cfg.keyphrase_count);
  for (const auto& [term, _] : scored) {
    profile.terms[term] = 1.0 / static_cast<double>(scored.size());
  }
  return profile;
}

/// Chooses the query-handling path. An empty query falls back to the paper's
/// keyphrases (or an empty profile when no paper is given); more than
/// cfg.verbosity_threshold content tokens selects fixed-point weighting.
/// Entities named in the query join the filter entities.
inline QueryProfile build_profile(std::string_view query, const EntitySet& filter_entities,
                                  const Index& index,
                                  const std::optional<std::string>& paper_id = std::nullopt,
                                  const QueryConfig& cfg = {}) {
  auto tokens = normalize(query, index.stopwords());
  QueryProfile profile;
  if (tokens.empty()) {
    if (paper_id) {
      profile = keyphrase_surrogate(*paper_id, index, cfg);
    } else {
      profile.origin = ProfileOrigin::kKeyphraseSurrogate;
    }
  } else if (tokens.size() > cfg.verbosity_threshold) {
    std::vector<std::vector<std::string>> sentences;
    for (const auto& s : segment_sentences(query)) {
      sentences.push_back(normalize(s, index.stopwords()));
    }
    profile = weight_verbose(sentences, cfg);
  } else {
    profile = expand_query(tokens, index, cfg);
  }
  profile.entities = filter_entities;
  auto named = tag_entities(query, index.dictionary());
  profile.entities.insert(named.begin(), named.end());
  return profile;
}

}  // namespace scisumm
