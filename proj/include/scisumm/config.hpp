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

// INI configuration covering every tunable of the pipeline. Missing keys keep
// their defaults; SCISUMM_CONFIG names the file and SCISUMM_PORT overrides
// the service port.

#include <cstdlib>
#include <fstream>
#include <istream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "scisumm/errors.hpp"
#include "scisumm/index.hpp"
#include "scisumm/ingest.hpp"
#include "scisumm/query.hpp"
#include "scisumm/summarizer.hpp"

namespace scisumm {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string snapshot;
  std::size_t cache_capacity = 256;
};

struct Config {
  CEConfig summarizer;
  QueryConfig query;
  Bm25Config bm25;
  DedupeConfig dedupe;
  ServiceConfig service;
};

namespace detail {

template <typename T>
void read_key(const boost::property_tree::ptree& tree, const std::string& key, T& value) {
  using Path = boost::property_tree::ptree::path_type;
  try {
    auto node = tree.get_child_optional(Path(key, '/'));
    if (!node) return;
    auto v = node->get_value_optional<T>();
    if (!v) throw Error(Errc::kMalformedConfig, key + ": bad value '" + node->data() + "'");
    value = *v;
  } catch (const boost::property_tree::ptree_error& e) {
    throw Error(Errc::kMalformedConfig, key + ": " + e.what());
  }
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(Errc::kMalformedConfig, e.what());
  }
  Config c;
  auto& ce = c.summarizer;
  detail::read_key(tree, "summarizer/sample_size", ce.sample_size);
  detail::read_key(tree, "summarizer/elite_fraction", ce.elite_fraction);
  detail::read_key(tree, "summarizer/smoothing_alpha", ce.smoothing_alpha);
  detail::read_key(tree, "summarizer/max_iterations", ce.max_iterations);
  detail::read_key(tree, "summarizer/stop_tol", ce.stop_tol);
  detail::read_key(tree, "summarizer/summary_length", ce.summary_length);
  detail::read_key(tree, "summarizer/seed", ce.seed);
  detail::read_key(tree, "summarizer/threads", ce.threads);

  auto& q = c.query;
  detail::read_key(tree, "query/expansion.top_docs", q.top_docs);
  detail::read_key(tree, "query/expansion.profile_size", q.profile_size);
  detail::read_key(tree, "query/expansion.original_weight", q.original_weight);
  detail::read_key(tree, "query/verbosity.threshold", q.verbosity_threshold);
  detail::read_key(tree, "query/keyphrase.count", q.keyphrase_count);
  detail::read_key(tree, "query/fixedpoint.tol", q.fixedpoint_tol);
  detail::read_key(tree, "query/fixedpoint.max_iters", q.fixedpoint_max_iters);

  detail::read_key(tree, "index/k1", c.bm25.k1);
  detail::read_key(tree, "index/b", c.bm25.b);
  detail::read_key(tree, "index/weight.title", c.bm25.field_weights[0]);
  detail::read_key(tree, "index/weight.abstract", c.bm25.field_weights[1]);
  detail::read_key(tree, "index/weight.section", c.bm25.field_weights[2]);

  detail::read_key(tree, "dedupe/title_threshold", c.dedupe.title_threshold);
  detail::read_key(tree, "dedupe/author_threshold", c.dedupe.author_threshold);

  detail::read_key(tree, "service/host", c.service.host);
  detail::read_key(tree, "service/port", c.service.port);
  detail::read_key(tree, "service/snapshot", c.service.snapshot);
  detail::read_key(tree, "service/cache_capacity", c.service.cache_capacity);

  c.summarizer.validate();
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kMalformedConfig, "cannot open " + path);
  return parse_config(in);
}

/// Explicit path, else $SCISUMM_CONFIG, else defaults; then $SCISUMM_PORT.
inline Config resolve_config(const std::string& explicit_path = {}) {
  Config c;
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("SCISUMM_CONFIG")) path = env;
  }
  if (!path.empty()) c = load_config(path);
  if (const char* port = std::getenv("SCISUMM_PORT")) {
    try {
      c.service.port = std::stoi(port);
    } catch (const std::exception&) {
      throw Error(Errc::kMalformedConfig, std::string("SCISUMM_PORT: bad value ") + port);
    }
  }
  return c;
}

}  // namespace scisumm
