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

#include <catch2/catch_amalgamated.hpp>

#include "scisumm/query.hpp"
#include "support/corpus.hpp"

using namespace scisumm;
using Catch::Approx;
using scisumm::testing::build_index;

namespace {

nlohmann::json paper(const std::string& id, const std::string& title, const std::string& body) {
  return {{"id", id}, {"title", title},
          {"sections", {{{"title", "Body"}, {"depth", 1}, {"text", body}}}}};
}

double total(const QueryProfile& p) {
  double s = 0;
  for (const auto& [_, w] : p.terms) s += w;
  return s;
}

}  // namespace

TEST_CASE("single-paper expansion picks the paper's most frequent unigrams", "[query]") {
  auto j = paper("solo", "Sparse retrieval",
                 "Sparse retrieval uses inverted lists. Inverted lists store postings. "
                 "Postings hold term counts. Retrieval speed matters for lists.");
  auto index = build_index({j});

  // Oracle: relative frequencies over every indexed token of the paper.
  std::map<std::string, double> rel;
  double n = 0;
  auto add = [&](const std::string& text) {
    for (auto& t : normalize(text, Stopwords::builtin())) {
      rel[t] += 1;
      n += 1;
    }
  };
  add(j["title"].get<std::string>());
  add(j["sections"][0]["text"].get<std::string>());
  std::vector<std::pair<std::string, double>> ranked(rel.begin(), rel.end());
  std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  QueryConfig cfg;
  cfg.profile_size = 4;
  std::vector<std::string> query{"sparse"};
  auto profile = expand_query(query, index, cfg);
  std::set<std::string> expected{"sparse"};
  for (const auto& [t, _] : ranked) {
    if (expected.size() == cfg.profile_size) break;
    expected.insert(t);
  }
  std::set<std::string> got;
  for (const auto& [t, _] : profile.terms) got.insert(t);
  CHECK(got == expected);
  CHECK(total(profile) == Approx(1.0).margin(1e-9));
  CHECK(profile.origin == ProfileOrigin::kExpanded);
}

TEST_CASE("expansion is bounded by the corpus vocabulary", "[query]") {
  std::string body;
  for (int i = 0; i < 40; ++i) body += "term" + std::to_string(i) + "x ";
  auto index = build_index({paper("v", "term0x", body + ".")});
  std::vector<std::string> query{"term0x"};
  auto profile = expand_query(query, index);
  CHECK(profile.terms.size() <= 40);
  CHECK(profile.terms.size() == 40);
}

TEST_CASE("expansion without matches falls back to the query itself", "[query]") {
  auto index = build_index({paper("a", "Alpha", "Alpha beta.")});
  std::vector<std::string> query{"zzz", "zzz", "yyy"};
  auto profile = expand_query(query, index);
  CHECK(profile.terms.size() == 2);
  CHECK(profile.terms.at("zzz") == Approx(2.0 / 3.0));
  CHECK(profile.origin == ProfileOrigin::kExpanded);
}

TEST_CASE("fixed-point weighting on one sentence returns relative frequencies", "[query]") {
  auto p = weight_verbose({{"a", "b", "a", "c"}});
  CHECK(p.terms.at("a") == Approx(0.5));
  CHECK(p.terms.at("b") == Approx(0.25));
  CHECK(p.terms.at("c") == Approx(0.25));
  CHECK(p.origin == ProfileOrigin::kVerboseWeighted);

  auto uniform = weight_verbose({{"x", "y", "z"}});
  for (const auto& [_, w] : uniform.terms) CHECK(w == Approx(1.0 / 3.0));
  CHECK(weight_verbose({}).terms.empty());
}

TEST_CASE("fixed-point weighting matches a 20-iteration reference", "[query]") {
  std::vector<std::vector<std::string>> sentences{{"graph", "neural", "graph", "network"},
                                                  {"network", "pruning", "sparse"}};
  // Reference: terms indexed graph, neural, network, pruning, sparse.
  const std::vector<std::string> terms{"graph", "network", "neural", "pruning", "sparse"};
  const double rel[2][5] = {{0.5, 0.25, 0.25, 0.0, 0.0}, {0.0, 1.0 / 3, 0.0, 1.0 / 3, 1.0 / 3}};
  std::vector<double> w(5, 0.2);
  for (int it = 0; it < 20; ++it) {
    double imp[2] = {0, 0};
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 5; ++t) imp[s] += w[t] * rel[s][t];
    double is = imp[0] + imp[1];
    imp[0] /= is;
    imp[1] /= is;
    std::vector<double> next(5, 0.0);
    double ns = 0;
    for (int t = 0; t < 5; ++t) {
      next[t] = imp[0] * rel[0][t] + imp[1] * rel[1][t];
      ns += next[t];
    }
    for (auto& v : next) v /= ns;
    w = next;
  }

  QueryConfig cfg;
  cfg.fixedpoint_max_iters = 20;
  cfg.fixedpoint_tol = 0.0;
  auto p = weight_verbose(sentences, cfg);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    CHECK(p.terms.at(terms[t]) == Approx(w[t]).margin(1e-12));
  }
}

TEST_CASE("fixed-point result does not depend on the uniform start value", "[query]") {
  std::vector<std::vector<std::string>> sentences{
      {"a", "b", "c"}, {"b", "c", "d", "d"}, {"e", "a", "a"}};
  QueryConfig cfg;
  cfg.fixedpoint_max_iters = 500;
  cfg.fixedpoint_tol = 1e-14;
  auto one = weight_verbose(sentences, cfg, 1.0);
  auto other = weight_verbose(sentences, cfg, 37.5);
  for (const auto& [t, w] : one.terms) CHECK(other.terms.at(t) == Approx(w).margin(1e-12));
}

TEST_CASE("keyphrase surrogate", "[query]") {
  auto index = build_index({paper("k", "Kernel methods",
                                  "Kernels kernels kernels everywhere. Kernels are useful."),
                            paper("o", "Other", "Different words entirely.")});
  auto p = keyphrase_surrogate("k", index);
  CHECK(p.origin == ProfileOrigin::kKeyphraseSurrogate);
  CHECK(p.terms.count("kernels") == 1);
  double first = p.terms.begin()->second;
  for (const auto& [_, w] : p.terms) CHECK(w == first);
  CHECK(total(p) == Approx(1.0));
  CHECK_THROWS_AS(keyphrase_surrogate("missing", index), Error);

  std::string body;
  for (int i = 0; i < 500; ++i) body += "tok" + std::to_string(i) + "x ";
  auto big = build_index({paper("b", "Big", body + ".")});
  CHECK(keyphrase_surrogate("b", big).terms.size() == 15);
}

TEST_CASE("build_profile dispatches on query length", "[query]") {
  testing::Synth synth(41);
  auto index = build_index(synth.corpus(12));
  auto id = index.paper(0).paper_id;
  CHECK(build_profile("", {}, index, id).origin == ProfileOrigin::kKeyphraseSurrogate);
  CHECK(build_profile("the of and", {}, index, id).origin == ProfileOrigin::kKeyphraseSurrogate);
  auto w = synth.vocab();
  CHECK(build_profile(w[0] + " " + w[1], {}, index).origin == ProfileOrigin::kExpanded);
  auto verbose = w[0] + " " + w[1] + " " + w[2] + ". " + w[3] + " " + w[4] + " " + w[5];
  CHECK(build_profile(verbose, {}, index).origin == ProfileOrigin::kVerboseWeighted);

  EntitySet filter{{EntityKind::kDataset, "WMT14"}};
  auto p = build_profile("BLEU results", filter, index);
  CHECK(p.entities == EntitySet{{EntityKind::kDataset, "WMT14"}, {EntityKind::kMetric, "BLEU"}});
}

TEST_CASE("expanded profiles satisfy their invariants", "[query][property]") {
  for (int trial = 0; trial < 30; ++trial) {
    testing::Synth synth(100 + trial, 150);
    auto index = build_index(synth.corpus(8));
    std::vector<std::string> query;
    for (std::size_t i = 0, n = synth.uniform(1, 5); i < n; ++i) query.push_back(synth.word());
    auto p = expand_query(query, index);
    CHECK(p.terms.size() <= 100);
    CHECK(total(p) == Approx(1.0).margin(1e-9));
    for (const auto& q : query) CHECK(p.terms.count(q) == 1);
    for (const auto& [t, w] : p.terms) {
      CHECK(w >= 0.0);
      CHECK_FALSE(Stopwords::builtin().contains(t));
    }
  }
}
