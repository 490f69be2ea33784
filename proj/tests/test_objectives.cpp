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

#include "scisumm/objectives.hpp"
#include "support/objective_fixtures.hpp"
#include "support/oracle.hpp"

using namespace scisumm;
using namespace scisumm::testing;
using Catch::Approx;

namespace {

SentenceRefs refs(const SectionDoc& section, const std::vector<std::size_t>& ids) {
  SentenceRefs out;
  for (auto id : ids) out.push_back(&section.sentences[id]);
  return out;
}

void check_close(const ObjectiveBreakdown& got, const ObjectiveBreakdown& want, double tol) {
  CHECK(got.query_saliency == Approx(want.query_saliency).margin(tol));
  CHECK(got.entity_coverage == Approx(want.entity_coverage).margin(tol));
  CHECK(got.diversity == Approx(want.diversity).margin(tol));
  CHECK(got.text_coverage == Approx(want.text_coverage).margin(tol));
  CHECK(got.length == Approx(want.length).margin(tol));
  CHECK(got.product == Approx(want.product).margin(tol));
}

ObjectiveBreakdown from_oracle(const oracle::Objectives& o) {
  return {o.saliency, o.entities, o.diversity, o.coverage, o.length, o.product};
}

std::vector<int> as_int(const std::vector<std::size_t>& ids) {
  return {ids.begin(), ids.end()};
}

}  // namespace

TEST_CASE("primitive measures", "[objectives]") {
  CHECK(cosine({{"a", 0.5}, {"b", 0.5}}, {{"a", 1.0}}) == Approx(0.70710678).margin(1e-8));
  CHECK(cosine({}, {{"a", 1.0}}) == 0.0);
  CHECK(normalized_entropy({{"a", 3}, {"b", 1}}) == Approx(0.81127812).margin(1e-8));
  CHECK(normalized_entropy({{"a", 3}}) == 0.0);
  CHECK(normalized_entropy({{"a", 2}, {"b", 2}, {"c", 2}}) == Approx(1.0));

  const EntityKey a{EntityKind::kTask, "A"}, b{EntityKind::kTask, "B"};
  CHECK(entity_coverage({a, b}, {a}) == Approx(0.5));
  CHECK(entity_coverage({}, {}) == 1.0);
  CHECK(entity_coverage({a}, {}) == 1.0);
  CHECK(entity_coverage({}, {a}) == 0.0);

  auto f = make_section({words("a b c d e f g h i j"), words("k l m n o")});
  CHECK(length_objective(refs(f.section, {0, 1}), f.section) == Approx(0.75));
  CHECK(clamp_objective(0.0) == kObjectiveFloor);
  CHECK(clamp_objective(2.0) == 1.0);
}

TEST_CASE("hand-worked fixtures", "[objectives]") {
  for (const auto& h : hand_fixtures()) {
    INFO(h.name);
    const auto& section = h.fixture.section;
    check_close(score_summary(h.chosen, section, h.profile), h.expected, 1e-9);

    auto r = refs(section, h.chosen);
    auto slow = combine(query_saliency(r, h.profile),
                        entity_coverage(summary_entities(h.chosen, section), h.profile.entities),
                        diversity(r), text_coverage(r, section), length_objective(r, section));
    check_close(slow, h.expected, 1e-9);

    auto o = oracle::score(h.fixture.oracle, as_int(h.chosen), h.profile.terms,
                           entity_labels(h.profile.entities));
    check_close(from_oracle(o), h.expected, 1e-9);
  }
}

TEST_CASE("interned scoring agrees with the reference on random subsets", "[objectives][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto rs = random_section(1000 + trial, 4 + trial % 10, 20 + trial % 40);
    const auto& section = rs.fixture.section;
    std::vector<std::size_t> ids(section.sentences.size());
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(1 + rng() % ids.size());

    SectionModel model(section, rs.profile);
    auto scratch = model.make_scratch();
    auto fast = model.score(ids, scratch);
    auto again = model.score(ids, scratch);
    CHECK(fast == again);

    auto o = oracle::score(rs.fixture.oracle, as_int(ids), rs.profile.terms,
                           entity_labels(rs.profile.entities));
    check_close(fast, from_oracle(o), 1e-9);

    for (double v : {fast.query_saliency, fast.entity_coverage, fast.diversity,
                     fast.text_coverage, fast.length}) {
      CHECK(v >= kObjectiveFloor);
      CHECK(v <= 1.0);
    }
    CHECK(fast.product > 0.0);
    CHECK(fast.product <= 1.0);
  }
}

TEST_CASE("out-of-range sentence ids are rejected", "[objectives]") {
  auto f = make_section({words("a b"), words("c d")});
  std::vector<std::size_t> bad{0, 5};
  CHECK_THROWS_AS(score_summary(bad, f.section, QueryProfile{}), Error);
}
