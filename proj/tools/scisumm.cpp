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

// scisumm: ingest a paper corpus, search it, summarize papers, run the
// section-based vs. flat comparison, or serve the HTTP API.
//
// Exit codes: 0 ok, 1 internal error, 2 usage or contract error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scisumm/scisumm.hpp"
#include "scisumm/service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitContract = 2;

int exit_code_for(scisumm::Errc code) {
  switch (code) {
    case scisumm::Errc::kMalformedRecord:
    case scisumm::Errc::kEmptyPaper:
    case scisumm::Errc::kMalformedDictionary:
    case scisumm::Errc::kMalformedSnapshot:
    case scisumm::Errc::kMalformedConfig:
    case scisumm::Errc::kDuplicateId:
    case scisumm::Errc::kEmptyRequest:
    case scisumm::Errc::kUnknownPaper:
    case scisumm::Errc::kInvalidArgument:
      return kExitContract;
    case scisumm::Errc::kEmptySection:
      return kExitInternal;
  }
  return kExitInternal;
}

struct IngestArgs {
  std::string input;
  std::vector<std::string> dicts;
  std::string out;
  std::string stopwords;
};

struct SearchArgs {
  std::string snapshot;
  std::string query;
  std::optional<std::string> venue;
  std::optional<std::string> author;
  std::optional<int> year_min;
  std::optional<int> year_max;
  std::vector<std::string> entities;
  std::size_t k = 10;
};

struct SummarizeArgs {
  std::string snapshot;
  std::string paper_id;
  std::string query;
  std::optional<std::size_t> length;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

struct EvalArgs {
  std::string snapshot;
  std::string papers;
  std::string out;
  std::string query;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> length;
};

struct ServeArgs {
  std::string snapshot;
  std::optional<std::string> host;
  std::optional<int> port;
};

int run_ingest(const IngestArgs& args, const scisumm::Config& config) {
  using namespace scisumm;
  auto stopwords = args.stopwords.empty() ? Stopwords::builtin() : Stopwords::load(args.stopwords);
  auto dict = EntityDictionary::load(args.dicts);

  std::ifstream in(args.input);
  if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + args.input);
  auto parsed = parse_corpus(in);
  const auto before = parsed.size();
  auto papers = dedupe(std::move(parsed), config.dedupe);
  const auto removed = before - papers.size();

  Index index(stopwords, dict, config.bm25);
  std::map<std::size_t, std::size_t> histogram;
  for (auto& p : papers) {
    annotate_paper(p, stopwords, dict);
    ++histogram[p.sections.size()];
    index.index_paper(std::move(p));
  }
  index.freeze();
  index.save(args.out);

  std::array<std::size_t, 3> tagged{0, 0, 0};
  for (const auto& [key, _] : index.facet_counts({})) ++tagged[static_cast<int>(key.kind)];
  auto dict_counts = dict.counts();

  std::cout << "papers: " << index.size() << '\n';
  std::cout << "records_read: " << before << '\n';
  std::cout << "duplicates_removed: " << removed << '\n';
  std::cout << "dictionary: Task=" << dict_counts[0] << " Dataset=" << dict_counts[1]
            << " Metric=" << dict_counts[2] << '\n';
  std::cout << "entities: Task=" << tagged[0] << " Dataset=" << tagged[1]
            << " Metric=" << tagged[2] << '\n';
  std::cout << "sections_per_paper:";
  for (auto [sections, count] : histogram) std::cout << ' ' << sections << '=' << count;
  std::cout << '\n';
  std::cout << "terms: " << index.term_count() << '\n';
  std::cout << "snapshot: " << args.out << '\n';
  return kExitOk;
}

scisumm::SearchFilter make_filter(const SearchArgs& args) {
  using namespace scisumm;
  SearchFilter filter;
  filter.venue = args.venue;
  filter.author = args.author;
  if (args.year_min || args.year_max) {
    filter.year_range = std::make_pair(args.year_min.value_or(std::numeric_limits<int>::min()),
                                       args.year_max.value_or(std::numeric_limits<int>::max()));
  }
  for (const auto& spec : args.entities) {
    auto colon = spec.find(':');
    auto kind = colon == std::string::npos ? std::nullopt : parse_kind(spec.substr(0, colon));
    if (!kind) throw Error(Errc::kInvalidArgument, "--entity expects Kind:canonical, got " + spec);
    filter.entities.insert(EntityKey{*kind, spec.substr(colon + 1)});
  }
  return filter;
}

int run_search(const SearchArgs& args) {
  using namespace scisumm;
  auto index = Index::load(args.snapshot);
  auto filter = make_filter(args);
  auto tokens = normalize(args.query, index.stopwords());
  auto results = index.search(tokens, filter, args.k);
  std::cout << "rank\tscore\tpaper_id\ttitle\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::cout << i + 1 << '\t' << std::fixed << std::setprecision(4) << r.score << '\t'
              << r.paper_id << '\t' << index.find(r.paper_id)->title << '\n';
  }
  return kExitOk;
}

int run_summarize(const SummarizeArgs& args, const scisumm::Config& config) {
  using namespace scisumm;
  auto index = Index::load(args.snapshot);
  const auto* paper = index.find(args.paper_id);
  if (!paper) throw Error(Errc::kUnknownPaper, args.paper_id);
  auto cfg = config.summarizer;
  if (args.length) cfg.summary_length = *args.length;
  if (args.threads) cfg.threads = *args.threads;
  cfg.seed = args.seed ? *args.seed : request_seed(args.paper_id, args.query);
  auto profile = build_profile(args.query, {}, index, args.paper_id, config.query);
  auto summary = summarize_paper(*paper, profile, cfg);
  auto out = to_json(summary, *paper);
  out["profile"] = {{"origin", std::string(origin_name(profile.origin))},
                    {"terms", profile.terms}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_eval(const EvalArgs& args, const scisumm::Config& config) {
  using namespace scisumm;
  auto index = Index::load(args.snapshot);
  std::vector<std::string> ids;
  if (!args.papers.empty()) {
    std::ifstream in(args.papers);
    if (!in) throw Error(Errc::kInvalidArgument, "cannot open " + args.papers);
    std::string line;
    while (std::getline(in, line)) {
      auto id = std::string(detail::trim(line));
      if (!id.empty() && id[0] != '#') ids.push_back(id);
    }
  } else {
    for (std::size_t d = 0; d < index.size() && ids.size() < kDefaultEvalBatch; ++d) {
      ids.push_back(index.paper(d).paper_id);
    }
  }

  std::vector<ComparisonRow> rows;
  for (const auto& id : ids) {
    const auto* paper = index.find(id);
    if (!paper) throw Error(Errc::kUnknownPaper, id);
    auto cfg = config.summarizer;
    if (args.length) cfg.summary_length = *args.length;
    cfg.seed = args.seed ? *args.seed : request_seed(id, args.query);
    auto profile = build_profile(args.query, {}, index, id, config.query);
    auto pair = build_pair(*paper, profile, cfg);
    if (pair.flat.selected.size() != pair.section_based.total_sentences()) {
      throw std::logic_error("flat summary length differs from section-based length for " + id);
    }
    rows.push_back(compare(pair, *paper, profile));
  }

  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw Error(Errc::kInvalidArgument, "cannot write " + args.out);
    write_csv(out, rows);
  } else {
    write_csv(std::cout, rows);
  }
  std::cout << "papers: " << rows.size() << '\n';
  write_table(std::cout, aggregate(rows));
  return kExitOk;
}

int run_serve(const ServeArgs& args, scisumm::Config config) {
  using namespace scisumm;
  if (!args.snapshot.empty()) config.service.snapshot = args.snapshot;
  if (args.host) config.service.host = *args.host;
  if (args.port) config.service.port = *args.port;
  if (config.service.snapshot.empty()) {
    throw Error(Errc::kInvalidArgument, "no snapshot given (--snapshot or [service] snapshot)");
  }
  auto index = std::make_shared<const Index>(Index::load(config.service.snapshot));
  Api api(index, config);
  httplib::Server server;
  api.bind(server);
  std::cerr << "serving " << index->size() << " papers on " << config.service.host << ':'
            << config.service.port << '\n';
  if (!server.listen(config.service.host, config.service.port)) {
    std::cerr << "error: cannot bind " << config.service.host << ':' << config.service.port << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scientific paper search and query-focused summarization"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "INI config file (default: $SCISUMM_CONFIG)");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse, dedupe, tag and index a corpus");
  ingest_cmd->add_option("--input", ingest.input, "Newline-delimited paper records")->required();
  ingest_cmd->add_option("--dict", ingest.dicts, "Entity dictionary TSV (repeatable)");
  ingest_cmd->add_option("--out", ingest.out, "Snapshot file to write")->required();
  ingest_cmd->add_option("--stopwords", ingest.stopwords, "Stopword list (default: built-in)");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Ranked and faceted search");
  search_cmd->add_option("--snapshot", search.snapshot)->required();
  search_cmd->add_option("--query,-q", search.query);
  search_cmd->add_option("--venue", search.venue);
  search_cmd->add_option("--author", search.author);
  search_cmd->add_option("--year-min", search.year_min);
  search_cmd->add_option("--year-max", search.year_max);
  search_cmd->add_option("--entity", search.entities, "Kind:canonical, e.g. Task:question answering");
  search_cmd->add_option("--k", search.k, "Number of results");

  SummarizeArgs summarize;
  auto* summarize_cmd = app.add_subcommand("summarize", "Per-section summary of one paper");
  summarize_cmd->add_option("--snapshot", summarize.snapshot)->required();
  summarize_cmd->add_option("--paper-id", summarize.paper_id)->required();
  summarize_cmd->add_option("--query,-q", summarize.query);
  summarize_cmd->add_option("--length", summarize.length, "Sentences per section")
      ->check(CLI::PositiveNumber);
  summarize_cmd->add_option("--seed", summarize.seed);
  summarize_cmd->add_option("--threads", summarize.threads)->check(CLI::PositiveNumber);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Section-based vs. section-agnostic comparison");
  eval_cmd->add_option("--snapshot", eval.snapshot)->required();
  eval_cmd->add_option("--papers", eval.papers, "File with one paper id per line");
  eval_cmd->add_option("--out", eval.out, "CSV report path (default: stdout)");
  eval_cmd->add_option("--query,-q", eval.query);
  eval_cmd->add_option("--seed", eval.seed);
  eval_cmd->add_option("--length", eval.length)->check(CLI::PositiveNumber);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--snapshot", serve.snapshot);
  serve_cmd->add_option("--host", serve.host);
  serve_cmd->add_option("--port", serve.port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitContract;
  }

  try {
    auto config = scisumm::resolve_config(config_path);
    if (*ingest_cmd) return run_ingest(ingest, config);
    if (*search_cmd) return run_search(search);
    if (*summarize_cmd) return run_summarize(summarize, config);
    if (*eval_cmd) return run_eval(eval, config);
    if (*serve_cmd) return run_serve(serve, config);
  } catch (const scisumm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
