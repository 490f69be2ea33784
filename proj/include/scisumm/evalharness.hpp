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

// Section-based vs. section-agnostic comparison harness. Each paper gets a
// per-section summary and a flat summary of the same total length; the two
// are compared on objective metrics and aggregated into % wins and
// mean (std) per summary type.

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "scisumm/ingest.hpp"
#include "scisumm/objectives.hpp"
#include "scisumm/query.hpp"
#include "scisumm/summarizer.hpp"

namespace scisumm {

/// Batch size of the original protocol.
inline constexpr std::size_t kDefaultEvalBatch = 24;

struct SummaryPair {
  PaperSummary section_based;
  SectionSummary flat;
};

/// Section-based summary first, then a flat summary whose length equals the
/// section-based total.
inline SummaryPair build_pair(const PaperRecord& paper, const QueryProfile& profile,
                              const CEConfig& cfg) {
  SummaryPair pair;
  pair.section_based = summarize_paper(paper, profile, cfg);
  auto total = pair.section_based.total_sentences();
  if (total == 0) throw Error(Errc::kEmptySection, "paper " + paper.paper_id + " has no sentences");
  pair.flat = summarize_flat(paper, profile, total, cfg);
  return pair;
}

enum class Winner { kSectionBased, kFlat, kTie };

inline std::string_view winner_name(Winner w) {
  switch (w) {
    case Winner::kSectionBased: return "section_based";
    case Winner::kFlat: return "flat";
    case Winner::kTie: return "tie";
  }
  return "tie";
}

inline constexpr double kTieTolerance = 1e-12;

inline Winner decide(double section_based, double flat) {
  if (std::abs(section_based - flat) <= kTieTolerance) return Winner::kTie;
  return section_based > flat ? Winner::kSectionBased : Winner::kFlat;
}

struct MetricComparison {
  std::string metric;
  double section_based = 0.0;
  double flat = 0.0;
  Winner winner = Winner::kTie;
};

struct ComparisonRow {
  std::string paper_id;
  std::vector<MetricComparison> metrics;
};

inline const std::vector<std::string>& comparison_metrics() {
  static const std::vector<std::string> kMetrics = {"text_coverage", "query_saliency",
                                                    "diversity"};
  return kMetrics;
}

/// text_coverage: mean over summarized sections of each section summary
/// against its own section, vs. the flat summary against the whole paper.
/// query_saliency and diversity: both summaries as pooled sentence sets.
inline ComparisonRow compare(const SummaryPair& pair, const PaperRecord& paper,
                             const QueryProfile& profile) {
  ComparisonRow row;
  row.paper_id = paper.paper_id;

  SentenceRefs composed;
  double coverage_sum = 0.0;
  std::size_t covered = 0;
  for (const auto& s : pair.section_based.per_section) {
    if (s.skipped) continue;
    const auto& section = paper.sections.at(s.section_id);
    SentenceRefs refs;
    for (auto id : s.selected) refs.push_back(&section.sentences.at(id));
    coverage_sum += text_coverage(refs, section);
    ++covered;
    composed.insert(composed.end(), refs.begin(), refs.end());
  }
  auto flat_doc = flatten_paper(paper);
  SentenceRefs flat;
  for (auto id : pair.flat.selected) flat.push_back(&flat_doc.sentences.at(id));

  auto add = [&row](std::string name, double sb, double fl) {
    row.metrics.push_back({std::move(name), sb, fl, decide(sb, fl)});
  };
  add("text_coverage", covered ? coverage_sum / static_cast<double>(covered) : 0.0,
      text_coverage(flat, flat_doc));
  add("query_saliency", query_saliency(composed, profile), query_saliency(flat, profile));
  add("diversity", diversity(composed), diversity(flat));
  return row;
}

struct MetricAggregate {
  std::string metric;
  std::size_t papers = 0;
  double section_based_wins_pct = 0.0;
  double flat_wins_pct = 0.0;
  double ties_pct = 0.0;
  double section_based_mean = 0.0;
  double section_based_std = 0.0;
  double flat_mean = 0.0;
  double flat_std = 0.0;
};

namespace detail {

// Sample standard deviation; zero for fewer than two values.
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace detail

inline std::vector<MetricAggregate> aggregate(const std::vector<ComparisonRow>& rows) {
  std::vector<MetricAggregate> out;
  for (const auto& name : comparison_metrics()) {
    MetricAggregate agg;
    agg.metric = name;
    std::vector<double> sb, fl;
    std::size_t sb_wins = 0, fl_wins = 0, ties = 0;
    for (const auto& row : rows) {
      for (const auto& m : row.metrics) {
        if (m.metric != name) continue;
        sb.push_back(m.section_based);
        fl.push_back(m.flat);
        if (m.winner == Winner::kSectionBased) ++sb_wins;
        else if (m.winner == Winner::kFlat) ++fl_wins;
        else ++ties;
      }
    }
    agg.papers = sb.size();
    if (agg.papers > 0) {
      auto n = static_cast<double>(agg.papers);
      agg.section_based_wins_pct = 100.0 * static_cast<double>(sb_wins) / n;
      agg.flat_wins_pct = 100.0 * static_cast<double>(fl_wins) / n;
      agg.ties_pct = 100.0 * static_cast<double>(ties) / n;
    }
    std::tie(agg.section_based_mean, agg.section_based_std) = detail::mean_std(sb);
    std::tie(agg.flat_mean, agg.flat_std) = detail::mean_std(fl);
    out.push_back(agg);
  }
  return out;
}

/// CSV report: one row per (paper, metric), then per metric three summary
/// rows keyed "ALL:mean", "ALL:std" and "ALL:wins_pct". The winner column of
/// the mean row names the type with more wins; for the wins row it carries
/// the tie percentage.
inline void write_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
  };
  out << "paper_id,metric,section_based_value,flat_value,winner\n";
  for (const auto& row : rows) {
    for (const auto& m : row.metrics) {
      out << row.paper_id << ',' << m.metric << ',' << fmt(m.section_based) << ','
          << fmt(m.flat) << ',' << winner_name(m.winner) << '\n';
    }
  }
  for (const auto& agg : aggregate(rows)) {
    auto overall = decide(agg.section_based_wins_pct, agg.flat_wins_pct);
    out << "ALL:mean," << agg.metric << ',' << fmt(agg.section_based_mean) << ','
        << fmt(agg.flat_mean) << ',' << winner_name(overall) << '\n';
    out << "ALL:std," << agg.metric << ',' << fmt(agg.section_based_std) << ','
        << fmt(agg.flat_std) << ",\n";
    out << "ALL:wins_pct," << agg.metric << ',' << fmt(agg.section_based_wins_pct) << ','
        << fmt(agg.flat_wins_pct) << ",tie=" << fmt(agg.ties_pct) << '\n';
  }
}

/// Plain-text table with "% wins" and "Avg. score (std)" per summary type.
inline void write_table(std::ostream& out, const std::vector<MetricAggregate>& aggs) {
  out << std::fixed << std::setprecision(3);
  out << std::left << std::setw(16) << "metric" << " | " << std::setw(28)
      << "section-agnostic" << " | " << "section-based\n";
  out << std::setw(16) << "" << " | " << std::setw(8) << "% wins" << std::setw(20)
      << "avg. score (std)" << " | " << std::setw(8) << "% wins" << "avg. score (std)\n";
  for (const auto& a : aggs) {
    std::ostringstream flat, sb;
    flat << std::fixed << std::setprecision(3) << a.flat_mean << " (" << a.flat_std << ")";
    sb << std::fixed << std::setprecision(3) << a.section_based_mean << " ("
       << a.section_based_std << ")";
    out << std::setw(16) << a.metric << " | " << std::setw(8) << std::setprecision(1)
        << a.flat_wins_pct << std::setw(20) << flat.str() << " | " << std::setw(8)
        << a.section_based_wins_pct << sb.str() << '\n';
  }
}

}  // namespace scisumm
