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

// JSON-over-HTTP API: search with facets, paper retrieval and summarization
// against an immutable index snapshot. Handlers are plain functions from a
// request body to a status and body so they can be exercised without a
// socket; serve() binds them to an HTTP server.

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "scisumm/config.hpp"
#include "scisumm/entities.hpp"
#include "scisumm/errors.hpp"
#include "scisumm/index.hpp"
#include "scisumm/query.hpp"
#include "scisumm/summarizer.hpp"

namespace scisumm {

struct Response {
  int status = 200;
  std::string body;
};

/// FNV-1a; stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Summarization seed for a (paper, query) pair.
inline std::uint64_t request_seed(const std::string& paper_id, const std::string& query) {
  std::string key = paper_id;
  key.push_back('\0');
  key += query;
  return fnv1a(key);
}

class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<std::string> get(const std::string& key) {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  void put(const std::string& key, std::string value) {
    if (capacity_ == 0) return;
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) {
      it->second->second = std::move(value);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.emplace_front(key, std::move(value));
    map_[key] = order_.begin();
    if (map_.size() > capacity_) {
      map_.erase(order_.back().first);
      order_.pop_back();
    }
  }

  void clear() {
    std::lock_guard lock(mu_);
    order_.clear();
    map_.clear();
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

 private:
  using Entry = std::pair<std::string, std::string>;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> order_;
  std::unordered_map<std::string, std::list<Entry>::iterator> map_;
};

namespace detail {

inline Response json_response(int status, const nlohmann::json& body) {
  return {status, body.dump()};
}

inline Response error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"error", std::string(code)}, {"message", message}});
}

// Throws Error(kInvalidArgument) with a field path on any schema violation.
inline SearchFilter parse_filter(const nlohmann::json& j) {
  SearchFilter f;
  if (!j.is_object()) throw Error(Errc::kInvalidArgument, "filters: expected object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    if (key == "venue") {
      if (!value.is_string()) throw Error(Errc::kInvalidArgument, "filters.venue: expected string");
      f.venue = value.get<std::string>();
    } else if (key == "author") {
      if (!value.is_string()) throw Error(Errc::kInvalidArgument, "filters.author: expected string");
      f.author = value.get<std::string>();
    } else if (key == "year_range") {
      if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
          !value[1].is_number_integer()) {
        throw Error(Errc::kInvalidArgument, "filters.year_range: expected [min, max]");
      }
      f.year_range = std::make_pair(value[0].get<int>(), value[1].get<int>());
      if (f.year_range->first > f.year_range->second) {
        throw Error(Errc::kInvalidArgument, "filters.year_range: min > max");
      }
    } else if (key == "entities") {
      if (!value.is_array()) throw Error(Errc::kInvalidArgument, "filters.entities: expected array");
      for (const auto& e : value) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
          throw Error(Errc::kInvalidArgument, "filters.entities: expected [kind, canonical] pairs");
        }
        auto kind = parse_kind(e[0].get<std::string>());
        if (!kind) throw Error(Errc::kInvalidArgument, "filters.entities: unknown kind");
        f.entities.insert(EntityKey{*kind, e[1].get<std::string>()});
      }
    } else {
      throw Error(Errc::kInvalidArgument, "filters." + key + ": unknown field");
    }
  }
  return f;
}

}  // namespace detail

inline nlohmann::json to_json(const FacetCounts& facets) {
  auto out = nlohmann::json::array();
  for (const auto& [key, count] : facets) {
    out.push_back({{"kind", std::string(kind_name(key.kind))},
                   {"canonical", key.canonical},
                   {"count", count}});
  }
  return out;
}

class Api {
 public:
  Api(std::shared_ptr<const Index> index, Config config)
      : index_(std::move(index)), config_(std::move(config)),
        cache_(config_.service.cache_capacity) {}

  std::shared_ptr<const Index> snapshot() const {
    std::lock_guard lock(mu_);
    return index_;
  }

  /// Replaces the served snapshot; in-flight requests keep the old one.
  void swap_snapshot(std::shared_ptr<const Index> index) {
    {
      std::lock_guard lock(mu_);
      index_ = std::move(index);
    }
    cache_.clear();
  }

  const LruCache& cache() const { return cache_; }

  Response search(const std::string& body) const {
    nlohmann::json req;
    try {
      req = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
      return detail::error_response(400, "BadRequest", "invalid JSON body");
    }
    if (!req.is_object()) return detail::error_response(400, "BadRequest", "expected object");

    std::string query;
    SearchFilter filter;
    std::size_t k = 10;
    try {
      if (auto it = req.find("query"); it != req.end() && !it->is_null()) {
        if (!it->is_string()) throw Error(Errc::kInvalidArgument, "query: expected string");
        query = it->get<std::string>();
      }
      if (auto it = req.find("filters"); it != req.end() && !it->is_null()) {
        filter = detail::parse_filter(*it);
      }
      if (auto it = req.find("k"); it != req.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<long long>() < 0) {
          throw Error(Errc::kInvalidArgument, "k: expected non-negative integer");
        }
        k = it->get<std::size_t>();
      }
    } catch (const Error& e) {
      return detail::error_response(422, "MalformedRequest", e.what());
    }

    auto index = snapshot();
    auto tokens = normalize(query, index->stopwords());
    if (tokens.empty() && filter.empty()) {
      return detail::error_response(400, "EmptyRequest", "provide a query or a non-empty filter");
    }

    nlohmann::json out;
    auto results = index->search(tokens, filter, k);
    out["results"] = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json fields = nlohmann::json::array();
      for (auto f : r.matched_fields) fields.push_back(std::string(field_name(f)));
      const auto* paper = index->find(r.paper_id);
      out["results"].push_back({{"paper_id", r.paper_id},
                                {"title", paper->title},
                                {"venue", paper->venue},
                                {"year", paper->year},
                                {"score", r.score},
                                {"matched_fields", fields},
                                {"snippet", r.snippet}});
    }
    out["facets"] = to_json(index->facet_counts(filter));
    if (!tokens.empty()) {
      auto profile = build_profile(query, filter.entities, *index, std::nullopt, config_.query);
      out["profile"] = profile_json(profile);
    } else {
      out["profile"] = nullptr;
    }
    return detail::json_response(200, out);
  }

  Response summarize(const std::string& body) const {
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
      return detail::error_response(400, "BadRequest", "invalid JSON body");
    }
    if (!req.is_object()) return detail::error_response(400, "BadRequest", "expected object");
    auto id_it = req.find("paper_id");
    if (id_it == req.end() || !id_it->is_string()) {
      return detail::error_response(422, "MalformedRequest", "paper_id: expected string");
    }
    std::string paper_id = id_it->get<std::string>();
    std::string query;
    if (auto it = req.find("query"); it != req.end() && !it->is_null()) {
      if (!it->is_string()) return detail::error_response(422, "MalformedRequest", "query: expected string");
      query = it->get<std::string>();
    }
    std::size_t length = config_.summarizer.summary_length;
    if (auto it = req.find("length"); it != req.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<long long>() < 1) {
        return detail::error_response(422, "MalformedRequest", "length: expected integer >= 1");
      }
      length = it->get<std::size_t>();
    }

    auto index = snapshot();
    const auto* paper = index->find(paper_id);
    if (!paper) return detail::error_response(404, "UnknownPaper", paper_id);

    auto key = paper_id + '\x1f' + query + '\x1f' + std::to_string(length);
    if (auto hit = cache_.get(key)) return {200, *hit};

    auto profile = build_profile(query, {}, *index, paper_id, config_.query);
    auto cfg = config_.summarizer;
    cfg.summary_length = length;
    cfg.seed = request_seed(paper_id, query);
    auto summary = summarize_paper(*paper, profile, cfg);
    auto out = to_json(summary, *paper);
    out["profile"] = profile_json(profile);
    auto text = out.dump();
    cache_.put(key, text);
    return {200, std::move(text)};
  }

  Response paper(const std::string& paper_id) const {
    auto index = snapshot();
    const auto* paper = index->find(paper_id);
    if (!paper) return detail::error_response(404, "UnknownPaper", paper_id);
    auto out = to_annotated_json(*paper);
    out["entities"] = nlohmann::json::array();
    for (const auto& e : paper->entities()) {
      out["entities"].push_back({std::string(kind_name(e.kind)), e.canonical});
    }
    return detail::json_response(200, out);
  }

  /// Registers the routes on an HTTP server.
  void bind(httplib::Server& server) const {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Post("/api/search", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, search(req.body));
    });
    server.Post("/api/summarize",
                [this, reply](const httplib::Request& req, httplib::Response& res) {
                  reply(res, summarize(req.body));
                });
    server.Get(R"(/api/papers/(.+))",
               [this, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, paper(req.matches[1].str()));
               });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(nlohmann::json{{"error", "Internal"}, {"message", what}}.dump(),
                      "application/json");
    });
  }

 private:
  static nlohmann::json profile_json(const QueryProfile& profile) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [t, w] : profile.terms) terms[t] = w;
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : profile.entities) ents.push_back({std::string(kind_name(e.kind)), e.canonical});
    return {{"origin", std::string(origin_name(profile.origin))}, {"terms", terms}, {"entities", ents}};
  }

  mutable std::mutex mu_;
  std::shared_ptr<const Index> index_;
  Config config_;
  mutable LruCache cache_;
};

}  // namespace scisumm
