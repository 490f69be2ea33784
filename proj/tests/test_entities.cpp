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

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "scisumm/entities.hpp"
#include "support/synth.hpp"

using namespace scisumm;

namespace {

SentenceUnit unit(const std::string& raw) { return make_sentence(0, raw, Stopwords::builtin()); }

}  // namespace

TEST_CASE("load_dictionaries counts and merges", "[entities]") {
  auto tasks = EntityDictionary::parse("Task\ta\nTask\tb\tB1|B2\n# comment\n\nTask\tc\n");
  CHECK(tasks.counts() == std::array<std::size_t, 3>{3, 0, 0});

  auto merged = EntityDictionary::parse("Dataset\tSQuAD\tSQuAD1\nDataset\tSQuAD\tSQuAD v1|Stanford QA\n");
  REQUIRE(merged.size() == 1);
  const auto* e = merged.find({EntityKind::kDataset, "SQuAD"});
  REQUIRE(e != nullptr);
  CHECK(e->aliases == std::set<std::string>{"SQuAD", "SQuAD1", "SQuAD v1", "Stanford QA"});

  std::vector<std::string> paths{SCISUMM_FIXTURES "/dictionary.tsv"};
  auto fixture = EntityDictionary::load(paths);
  CHECK(fixture.counts() == std::array<std::size_t, 3>{3, 3, 3});
}

TEST_CASE("malformed dictionaries report the line", "[entities]") {
  try {
    EntityDictionary::parse("Task\tok\nGadget\tthing\n", "dict.tsv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kMalformedDictionary);
    CHECK(std::string(e.what()).find("dict.tsv:2") != std::string::npos);
  }
  CHECK_THROWS_AS(EntityDictionary::parse("Task\n"), Error);
  CHECK_THROWS_AS(EntityDictionary::parse("Task\t\talias\n"), Error);
  CHECK_THROWS_AS(EntityDictionary::parse("Task\ta\tb\tc\n"), Error);
  std::vector<std::string> missing{"/nonexistent.tsv"};
  CHECK_THROWS_AS(EntityDictionary::load(missing), Error);
}

TEST_CASE("tag finds exact, longest and word-bounded matches", "[entities]") {
  auto dict = EntityDictionary::parse(
      "Dataset\tSQuAD2.0\n"
      "Dataset\tSQuAD\n"
      "Task\tquestion answering\tquestion answering systems\n");

  auto hits = tag(unit("We evaluate on SQuAD2.0"), dict);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].entity == EntityKey{EntityKind::kDataset, "SQuAD2.0"});
  CHECK(hits[0].surface == "SQuAD2.0");

  hits = tag(unit("question answering systems"), dict);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].surface == "question answering systems");
  CHECK(hits[0].entity.canonical == "question answering");

  CHECK(tag(unit("squadron"), dict).empty());
  CHECK(tag(unit("the SQuAD2.0."), dict).size() == 1);
  CHECK(tag(unit("SQuAD-style data"), dict).size() == 1);
  CHECK(tag(unit("xSQuAD"), dict).empty());
}

TEST_CASE("tag invariants hold on random text", "[entities][property]") {
  auto dict = EntityDictionary::parse(testing::kDictionaryTsv);
  testing::Synth synth(5);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    auto raw = synth.sentence(1.0);
    auto hits = dict.match(raw);
    for (std::size_t i = 1; i < hits.size(); ++i) {
      CHECK(hits[i - 1].position + hits[i - 1].length <= hits[i].position);
    }
    for (const auto& m : tag(unit(raw), dict)) {
      const auto* e = dict.find(m.entity);
      REQUIRE(e != nullptr);
      bool alias_hit = false;
      for (const auto& a : e->aliases) alias_hit |= detail::to_lower(a) == detail::to_lower(m.surface);
      CHECK(alias_hit);
    }
    // Letter case of the input does not change what is found.
    std::string flipped = raw;
    for (auto& c : flipped) {
      if (rng() % 2) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      else c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    auto a = dict.match(raw);
    auto b = dict.match(flipped);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].entity == b[i].entity);
      CHECK(a[i].position == b[i].position);
    }
  }
}

TEST_CASE("tag_entities collects distinct entities", "[entities]") {
  auto dict = EntityDictionary::parse(testing::kDictionaryTsv);
  auto found = tag_entities("BLEU on WMT14 and WMT 2014 for MT; also bleu score", dict);
  CHECK(found == EntitySet{{EntityKind::kTask, "machine translation"},
                           {EntityKind::kDataset, "WMT14"},
                           {EntityKind::kMetric, "BLEU"}});
}
