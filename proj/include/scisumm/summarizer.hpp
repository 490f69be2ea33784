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

// Per-section extractive summarization by Cross-Entropy search over
// fixed-size sentence subsets, plus section-based and section-agnostic
// composition of paper summaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scisumm/errors.hpp"
#include "scisumm/ingest.hpp"
#include "scisumm/objectives.hpp"
#include "scisumm/query.hpp"

namespace scisumm {

struct CEConfig {
  std::size_t sample_size = 500;
  double elite_fraction = 0.1;
  double smoothing_alpha = 0.7;
  std::size_t max_iterations = 60;
  double stop_tol = 1e-3;
  std::size_t summary_length = 10;
  std::uint64_t seed = 0;
  // Scoring threads per iteration; results do not depend on this.
  std::size_t threads = 1;

  void validate() const {
    if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) {
      throw Error(Errc::kInvalidArgument, "elite_fraction must lie in (0,1)");
    }
    if (!(smoothing_alpha > 0.0 && smoothing_alpha <= 1.0)) {
      throw Error(Errc::kInvalidArgument, "smoothing_alpha must lie in (0,1]");
    }
    if (summary_length < 1) throw Error(Errc::kInvalidArgument, "summary_length must be >= 1");
    if (sample_size < 1) throw Error(Errc::kInvalidArgument, "sample_size must be >= 1");
    if (threads < 1) throw Error(Errc::kInvalidArgument, "threads must be >= 1");
  }
};

struct SectionSummary {
  std::size_t section_id = 0;
  std::vector<std::size_t> selected;  // ascending, document order
  ObjectiveBreakdown breakdown;
  std::size_t iterations_used = 0;
  bool skipped = false;  // section had no sentences

  bool operator==(const SectionSummary&) const = default;
};

struct PaperSummary {
  std::string paper_id;
  std::vector<SectionSummary> per_section;

  std::size_t total_sentences() const {
    std::size_t n = 0;
    for (const auto& s : per_section) n += s.selected.size();
    return n;
  }
  bool operator==(const PaperSummary&) const = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1), portable across standard libraries.
inline double open_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Draws `count` distinct indices where each successive pick is proportional
// to the remaining weights (exponential-key form of sequential weighted
// sampling). Zero-weight items are only used, uniformly, once the positive
// ones run out.
inline void sample_subset(std::span<const double> weights, std::size_t count,
                          std::mt19937_64& rng, std::vector<std::pair<double, std::size_t>>& keys,
                          std::vector<std::size_t>& out) {
  keys.clear();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double u = open_unit(rng);
    double key = weights[i] > 0.0 ? std::max(std::log(u) / weights[i], -1e300)
                                  : -1e301 - 1e300 * u;
    keys.emplace_back(key, i);
  }
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  out.clear();
  for (std::size_t k = 0; k < count; ++k) out.push_back(keys[k].second);
  std::sort(out.begin(), out.end());
}

}  // namespace detail

/// Selects cfg.summary_length sentences of a section maximizing the objective
/// product. Starts from uniform inclusion probabilities L/n, samples
/// exactly-L subsets, refits the probabilities toward the elite samples with
/// smoothing, and returns the best subset seen. Sections with at most L
/// sentences are returned whole.
inline SectionSummary ce_optimize(const SectionDoc& section, const QueryProfile& profile,
                                  const CEConfig& cfg) {
  cfg.validate();
  const std::size_t n = section.sentences.size();
  if (n == 0) {
    throw Error(Errc::kEmptySection, "section " + std::to_string(section.section_id));
  }
  SectionModel model(section, profile);
  SectionSummary result;
  result.section_id = section.section_id;
  const std::size_t length = cfg.summary_length;
  if (n <= length) {
    result.selected.resize(n);
    std::iota(result.selected.begin(), result.selected.end(), 0);
    result.breakdown = model.score(result.selected);
    return result;
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<double> probs(n, static_cast<double>(length) / static_cast<double>(n));
  const std::size_t elite =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.elite_fraction *
                                                                  static_cast<double>(cfg.sample_size))));
  std::vector<std::vector<std::size_t>> samples(cfg.sample_size);
  std::vector<ObjectiveBreakdown> scores(cfg.sample_size);
  std::vector<std::pair<double, std::size_t>> keys;
  std::vector<std::size_t> order(cfg.sample_size);
  std::vector<double> freq(n);

  const std::size_t workers = std::min(cfg.threads, cfg.sample_size);
  std::vector<SectionModel::Scratch> scratch;
  for (std::size_t w = 0; w < workers; ++w) scratch.push_back(model.make_scratch());
  auto score_range = [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) scores[s] = model.score(samples[s], scratch[w]);
  };

  bool have_best = false;
  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    // All subsets come from the seeded stream before any scoring, so the
    // result is independent of the thread count.
    for (auto& sample : samples) detail::sample_subset(probs, length, rng, keys, sample);

    if (workers <= 1) {
      score_range(0, 0, samples.size());
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (samples.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(samples.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(score_range, w, begin, end);
      }
      for (auto& t : pool) t.join();
    }

    for (std::size_t s = 0; s < samples.size(); ++s) {
      if (!have_best || scores[s].product > result.breakdown.product) {
        have_best = true;
        result.selected = samples[s];
        result.breakdown = scores[s];
      }
    }

    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(elite), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (scores[a].product != scores[b].product) {
                          return scores[a].product > scores[b].product;
                        }
                        return a < b;
                      });
    std::fill(freq.begin(), freq.end(), 0.0);
    for (std::size_t e = 0; e < elite; ++e) {
      for (auto id : samples[order[e]]) freq[id] += 1.0;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double next = cfg.smoothing_alpha * (freq[i] / static_cast<double>(elite)) +
                    (1.0 - cfg.smoothing_alpha) * probs[i];
      delta = std::max(delta, std::abs(next - probs[i]));
      probs[i] = next;
    }
    result.iterations_used = iter;
    if (delta < cfg.stop_tol) break;
  }
  return result;
}

/// Seed for one section, derived from the request seed.
inline std::uint64_t section_seed(std::uint64_t seed, std::size_t section_id) {
  return detail::splitmix64(seed ^ detail::splitmix64(section_id + 1));
}

/// Summarizes every section independently and composes the results in
/// document order. Sections without sentences are marked skipped.
inline PaperSummary summarize_paper(const PaperRecord& paper, const QueryProfile& profile,
                                    const CEConfig& cfg) {
  PaperSummary out;
  out.paper_id = paper.paper_id;
  for (const auto& section : paper.sections) {
    if (section.sentences.empty()) {
      SectionSummary skipped;
      skipped.section_id = section.section_id;
      skipped.skipped = true;
      out.per_section.push_back(skipped);
      continue;
    }
    auto local = cfg;
    local.seed = section_seed(cfg.seed, section.section_id);
    out.per_section.push_back(ce_optimize(section, profile, local));
  }
  return out;
}

/// All sentences of a paper pooled into one pseudo-section, ids renumbered
/// in document order and entity mentions carried along.
inline SectionDoc flatten_paper(const PaperRecord& paper) {
  SectionDoc flat;
  flat.section_id = 0;
  flat.title = paper.title;
  for (const auto& section : paper.sections) {
    std::size_t offset = flat.sentences.size();
    for (const auto& s : section.sentences) {
      auto copy = s;
      copy.id = flat.sentences.size();
      flat.sentences.push_back(std::move(copy));
    }
    for (const auto& m : section.mentions) {
      auto copy = m;
      copy.section_id = 0;
      copy.sentence_id += offset;
      flat.mentions.push_back(std::move(copy));
    }
    if (!flat.text.empty()) flat.text += "\n\n";
    flat.text += section.text;
  }
  return flat;
}

/// Section-agnostic summary of exactly min(target_length, sentences)
/// sentences.
inline SectionSummary summarize_flat(const PaperRecord& paper, const QueryProfile& profile,
                                     std::size_t target_length, const CEConfig& cfg) {
  if (target_length < 1) throw Error(Errc::kInvalidArgument, "target_length must be >= 1");
  auto flat = flatten_paper(paper);
  auto local = cfg;
  local.summary_length = target_length;
  local.seed = section_seed(cfg.seed, paper.sections.size() + 1);
  return ce_optimize(flat, profile, local);
}

inline nlohmann::json to_json(const ObjectiveBreakdown& b) {
  return {{"query_saliency", b.query_saliency}, {"entity_coverage", b.entity_coverage},
          {"diversity", b.diversity},           {"text_coverage", b.text_coverage},
          {"length", b.length},                 {"product", b.product}};
}

/// Summary output: {paper_id, sections: [{section_id, title, sentences,
/// objective}]}, plus detected entities per section.
inline nlohmann::json to_json(const PaperSummary& summary, const PaperRecord& paper) {
  nlohmann::json j;
  j["paper_id"] = summary.paper_id;
  j["sections"] = nlohmann::json::array();
  for (const auto& s : summary.per_section) {
    const auto& section = paper.sections.at(s.section_id);
    nlohmann::json out;
    out["section_id"] = s.section_id;
    out["title"] = section.title;
    out["sentences"] = nlohmann::json::array();
    for (auto id : s.selected) out["sentences"].push_back(section.sentences.at(id).raw);
    out["objective"] = to_json(s.breakdown);
    out["iterations"] = s.iterations_used;
    EntitySet ents;
    for (const auto& m : section.mentions) ents.insert(m.entity);
    out["entities"] = nlohmann::json::array();
    for (const auto& e : ents) out["entities"].push_back({std::string(kind_name(e.kind)), e.canonical});
    j["sections"].push_back(std::move(out));
  }
  return j;
}

}  // namespace scisumm
