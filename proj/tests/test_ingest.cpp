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

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "scisumm/ingest.hpp"
#include "support/synth.hpp"

using namespace scisumm;

namespace {

std::vector<RefMention> parse_expected(const std::string& field) {
  std::vector<RefMention> out;
  std::stringstream ss(field);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    out.push_back({std::stoul(item.substr(0, colon)), item.substr(colon + 1)});
  }
  return out;
}

std::string record(const std::string& id, const std::string& title,
                   std::vector<std::string> authors, const std::string& source) {
  nlohmann::json j{{"id", id}, {"title", title}, {"authors", authors}, {"source", source},
                   {"sections", {{{"title", "Intro"}, {"depth", 1}, {"text", "Some text."}}}}};
  return j.dump();
}

}  // namespace

TEST_CASE("parse_paper maps the schema and defaults optional fields", "[ingest]") {
  auto p = parse_paper(R"({"id":"a1","title":"T","sections":[{"title":"Intro","text":"Hello."}]})");
  CHECK(p.paper_id == "a1");
  CHECK(p.venue.empty());
  CHECK(p.year == 0);
  CHECK(p.source == Source::kOther);
  REQUIRE(p.sections.size() == 1);
  CHECK(p.sections[0].title == "Intro");

  auto abstract_only = parse_paper(R"({"id":"a2","title":"T","abstract":"Just this."})");
  REQUIRE(abstract_only.sections.size() == 1);
  CHECK(abstract_only.sections[0].text == "Just this.");
}

TEST_CASE("parse_paper errors", "[ingest]") {
  auto code_of = [](const std::string& text) {
    try {
      parse_paper(text);
    } catch (const Error& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(Errc::kInvalidArgument, std::string("no error"));
  };
  CHECK(code_of(R"({"id":"x"})").first == Errc::kEmptyPaper);
  CHECK(code_of(R"({"title":"no id"})").first == Errc::kMalformedRecord);
  CHECK(code_of("not json").first == Errc::kMalformedRecord);
  auto [code, what] = code_of(R"({"id":"x","title":"t","sections":[{"text":"a","depth":"deep"}]})");
  CHECK(code == Errc::kMalformedRecord);
  CHECK(what.find("$.sections[0].depth") != std::string::npos);
  CHECK(code_of(R"({"id":"x","title":"t","year":"1999"})").first == Errc::kMalformedRecord);
  CHECK(code_of(R"({"id":"x","title":"t","source":"ieee"})").first == Errc::kMalformedRecord);
}

TEST_CASE("twelve subsections under six headings merge into six sections", "[ingest]") {
  nlohmann::json j{{"id", "m"}, {"title", "Merge"}};
  j["sections"] = nlohmann::json::array();
  for (int top = 0; top < 6; ++top) {
    j["sections"].push_back({{"title", "H" + std::to_string(top)}, {"depth", 1}, {"text", "Top."}});
    for (int sub = 0; sub < 2; ++sub) {
      j["sections"].push_back({{"title", "S" + std::to_string(sub)}, {"depth", 2 + sub}, {"text", "Sub."}});
    }
  }
  auto p = parse_paper(j.dump());
  REQUIRE(p.sections.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(p.sections[i].title == "H" + std::to_string(i));
    CHECK(p.sections[i].text == "Top.\n\nS0\nSub.\n\nS1\nSub.");
  }
}

TEST_CASE("merge_subsections rules", "[ingest]") {
  auto merged = merge_subsections({{"Intro", 1, "a"}, {"Motivation", 2, "b"}});
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].text.find("a") != std::string::npos);
  CHECK(merged[0].text.find("Motivation\nb") != std::string::npos);
  CHECK(merge_subsections({{"A", 1, "x"}, {"B", 1, "y"}}).size() == 2);
  auto orphan = merge_subsections({{"x", 2, "t"}});
  REQUIRE(orphan.size() == 1);
  CHECK(orphan[0].title == "x");
}

TEST_CASE("detect_refs simple cases", "[ingest]") {
  CHECK(detect_refs("as shown in Figure 2") == std::vector<RefMention>{{12, "figure-2"}});
  CHECK(detect_refs("Tables 1 and 2") == std::vector<RefMention>{{0, "table-1"}, {0, "table-2"}});
  CHECK(detect_refs("configure the system").empty());
}

TEST_CASE("detect_refs matches the hand-labeled snippets", "[ingest]") {
  std::ifstream in(SCISUMM_FIXTURES "/refs.tsv");
  REQUIRE(in);
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    auto snippet = line.substr(0, tab);
    INFO(snippet);
    CHECK(detect_refs(snippet) == parse_expected(line.substr(tab + 1)));
    ++cases;
  }
  CHECK(cases == 30);
}

TEST_CASE("dedupe examples", "[ingest]") {
  std::vector<PaperRecord> same{parse_paper(record("a", "Deep Models", {"Ann Lee", "Bo Chen"}, "arxiv")),
                                parse_paper(record("b", "Deep Models", {"Ann Lee", "Bo Chen"}, "arxiv"))};
  auto out = dedupe(same);
  REQUIRE(out.size() == 1);
  CHECK(out[0].paper_id == "a");

  std::vector<PaperRecord> disjoint{parse_paper(record("a", "Deep Models", {"Ann Lee"}, "arxiv")),
                                    parse_paper(record("b", "Deep Models", {"Cy Park"}, "arxiv"))};
  CHECK(dedupe(disjoint).size() == 2);
}

TEST_CASE("dedupe near-duplicate pair keeps the ACL copy", "[ingest]") {
  // 12 vs 13 title tokens sharing 12 -> 12/13; authors share 3 of 5 -> 0.6.
  std::string base = "alpha beta gamma delta epsilon zeta eta theta iota kappa lambda mu";
  auto arxiv = parse_paper(record("arxiv-1", base, {"A One", "B Two", "C Three", "D Four"}, "arxiv"));
  auto acl = parse_paper(record("acl-9", base + " nu", {"A One", "B Two", "C Three", "E Five"}, "acl"));

  auto title_a = detail::title_tokens(arxiv.title);
  auto title_b = detail::title_tokens(acl.title);
  std::set<std::string> ta(title_a.begin(), title_a.end()), tb(title_b.begin(), title_b.end());
  std::set<std::string> inter, uni = ta;
  for (auto& t : ta) if (tb.count(t)) inter.insert(t);
  uni.insert(tb.begin(), tb.end());
  double title_j = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  CHECK(title_j == Catch::Approx(12.0 / 13.0));
  CHECK(title_j >= 0.9);
  CHECK(detail::sorted_jaccard(detail::author_keys(arxiv.authors), detail::author_keys(acl.authors)) ==
        Catch::Approx(0.6));

  auto out = dedupe({arxiv, acl});
  REQUIRE(out.size() == 1);
  CHECK(out[0].paper_id == "acl-9");
  CHECK(out[0].source == Source::kAcl);
}

TEST_CASE("parse then serialize round-trips well-formed records", "[ingest][property]") {
  testing::Synth synth(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto j = synth.paper("r" + std::to_string(trial));
    for (auto& s : j["sections"]) s["depth"] = 1;
    auto p = parse_paper(j.dump());
    auto again = parse_paper(to_input_json(p).dump());
    CHECK(again == p);
    CHECK(to_input_json(again) == to_input_json(p));
  }
}

TEST_CASE("annotate_paper fills sentences, refs and mentions", "[ingest]") {
  auto dict = EntityDictionary::parse("Metric\tBLEU\nDataset\tWMT14\n");
  auto p = parse_paper(R"({"id":"z","title":"t","sections":[
    {"title":"Intro","text":"We report BLEU on WMT14. See Figure 1 for the setup."},
    {"title":"More","text":"Nothing here."}]})");
  annotate_paper(p, Stopwords::builtin(), dict);
  REQUIRE(p.sections[0].sentences.size() == 2);
  CHECK(p.sections[0].mentions.size() == 2);
  CHECK(p.sections[0].mentions[0].sentence_id == 0);
  CHECK(p.sections[0].ref_mentions == std::vector<RefMention>{{29, "figure-1"}});
  CHECK(p.sections[1].section_id == 1);
  CHECK(p.entities().size() == 2);
}

TEST_CASE("parse_corpus reports the failing line", "[ingest]") {
  std::istringstream in(record("a", "x", {}, "acl") + "\n\n{\"id\": 5}\n");
  try {
    parse_corpus(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kMalformedRecord);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("dedupe is idempotent and order independent", "[ingest][property]") {
  testing::Synth synth(33);
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PaperRecord> corpus;
    for (int i = 0; i < 15; ++i) {
      auto j = synth.paper("d" + std::to_string(trial) + "-" + std::to_string(i), 1, 2, 1, 3);
      corpus.push_back(parse_paper(j.dump()));
      if (synth.chance(0.4)) {
        j["id"] = "e" + std::to_string(trial) + "-" + std::to_string(i);
        j["source"] = synth.chance(0.5) ? "acl" : "arxiv";
        corpus.push_back(parse_paper(j.dump()));
      }
    }
    auto once = dedupe(corpus);
    CHECK(dedupe(once) == once);
    std::shuffle(corpus.begin(), corpus.end(), rng);
    CHECK(dedupe(corpus) == once);
  }
}

TEST_CASE("merge preserves characters up to separators", "[ingest][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RawSection> raw;
    std::size_t text_chars = 0, separators = 0;
    for (std::size_t i = 0, n = 1 + rng() % 10; i < n; ++i) {
      RawSection r{"t" + std::to_string(i), 1 + static_cast<int>(rng() % 3),
                   std::string(rng() % 50, 'x')};
      text_chars += r.text.size();
      if (r.depth > 1 && !raw.empty()) separators += r.title.size() + 3;
      raw.push_back(r);
    }
    std::size_t merged_chars = 0;
    for (const auto& s : merge_subsections(raw)) merged_chars += s.text.size();
    CHECK(merged_chars == text_chars + separators);
  }
}
