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

// Dictionary-based Task / Dataset / Metric tagging.

#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scisumm/errors.hpp"
#include "scisumm/textproc.hpp"

namespace scisumm {

enum class EntityKind { kTask = 0, kDataset = 1, kMetric = 2 };

inline std::string_view kind_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::kTask: return "Task";
    case EntityKind::kDataset: return "Dataset";
    case EntityKind::kMetric: return "Metric";
  }
  return "Task";
}

inline std::optional<EntityKind> parse_kind(std::string_view name) {
  auto lower = detail::to_lower(name);
  if (lower == "task") return EntityKind::kTask;
  if (lower == "dataset") return EntityKind::kDataset;
  if (lower == "metric") return EntityKind::kMetric;
  return std::nullopt;
}

struct EntityKey {
  EntityKind kind = EntityKind::kTask;
  std::string canonical;

  auto operator<=>(const EntityKey&) const = default;
  bool operator==(const EntityKey&) const = default;
};

using EntitySet = std::set<EntityKey>;

struct Entity {
  EntityKind kind = EntityKind::kTask;
  std::string canonical;
  std::set<std::string> aliases;

  EntityKey key() const { return {kind, canonical}; }
};

struct EntityMention {
  EntityKey entity;
  std::size_t section_id = 0;
  std::size_t sentence_id = 0;
  std::size_t position = 0;  // byte offset within the sentence
  std::string surface;

  bool operator==(const EntityMention&) const = default;
};

class EntityDictionary {
 public:
  EntityDictionary() = default;

  /// Reads TSV lines `kind<TAB>canonical<TAB>alias1|alias2|...`; the alias
  /// column is optional. Entries repeating a (kind, canonical) pair merge
  /// their aliases.
  static EntityDictionary load(std::span<const std::string> paths) {
    EntityDictionary dict;
    for (const auto& path : paths) {
      std::ifstream in(path);
      if (!in) {
        throw Error(Errc::kMalformedDictionary, "cannot open " + path);
      }
      dict.parse_stream(in, path);
    }
    dict.build();
    return dict;
  }

  static EntityDictionary parse(std::string_view text,
                                const std::string& origin = "<memory>") {
    EntityDictionary dict;
    std::string copy(text);
    std::istringstream in(copy);
    dict.parse_stream(in, origin);
    dict.build();
    return dict;
  }

  void add(EntityKind kind, const std::string& canonical,
           const std::set<std::string>& aliases = {}) {
    if (canonical.empty()) {
      throw Error(Errc::kMalformedDictionary, "empty canonical name");
    }
    auto& entity = entities_[EntityKey{kind, canonical}];
    entity.kind = kind;
    entity.canonical = canonical;
    entity.aliases.insert(canonical);
    for (const auto& a : aliases) {
      if (!a.empty()) entity.aliases.insert(a);
    }
    built_ = false;
  }

  // Rebuilds the alias trie. Called by load/parse; call after add().
  void build() {
    nodes_.assign(1, Node{});
    for (const auto& [key, entity] : entities_) {
      for (const auto& alias : entity.aliases) {
        auto lower = detail::to_lower(alias);
        std::size_t node = 0;
        for (char c : lower) {
          auto it = nodes_[node].next.find(c);
          if (it == nodes_[node].next.end()) {
            nodes_.push_back(Node{});
            it = nodes_[node].next.emplace(c, nodes_.size() - 1).first;
          }
          node = it->second;
        }
        // Entities are visited in key order: the first claimant of an alias
        // keeps it.
        if (!nodes_[node].entity) nodes_[node].entity = key;
      }
    }
    built_ = true;
  }

  std::array<std::size_t, 3> counts() const {
    std::array<std::size_t, 3> out{0, 0, 0};
    for (const auto& [key, _] : entities_) ++out[static_cast<int>(key.kind)];
    return out;
  }
  std::size_t count(EntityKind kind) const {
    return counts()[static_cast<int>(kind)];
  }
  std::size_t size() const { return entities_.size(); }
  const std::map<EntityKey, Entity>& entities() const { return entities_; }
  const Entity* find(const EntityKey& key) const {
    auto it = entities_.find(key);
    return it == entities_.end() ? nullptr : &it->second;
  }

  struct Match {
    std::size_t position = 0;
    std::size_t length = 0;
    EntityKey entity;
  };

  /// Case-insensitive, word-boundary anchored, longest match wins; a single
  /// left-to-right pass so matches never overlap.
  std::vector<Match> match(std::string_view text) const {
    std::vector<Match> out;
    if (!built_ || nodes_.size() <= 1) return out;
    const std::size_t n = text.size();
    auto boundary = [&](std::size_t pos) {
      if (pos == 0 || pos == n) return true;
      return detail::is_word_byte(text[pos - 1]) != detail::is_word_byte(text[pos]);
    };
    std::size_t i = 0;
    while (i < n) {
      if (!boundary(i)) {
        ++i;
        continue;
      }
      std::size_t node = 0;
      std::size_t best_end = 0;
      const EntityKey* best = nullptr;
      for (std::size_t j = i; j < n; ++j) {
        auto it = nodes_[node].next.find(detail::ascii_lower(text[j]));
        if (it == nodes_[node].next.end()) break;
        node = it->second;
        if (nodes_[node].entity && boundary(j + 1)) {
          best = &*nodes_[node].entity;
          best_end = j + 1;
        }
      }
      if (best) {
        out.push_back(Match{i, best_end - i, *best});
        i = best_end;
      } else {
        ++i;
      }
    }
    return out;
  }

 private:
  struct Node {
    std::map<char, std::size_t> next;
    std::optional<EntityKey> entity;
  };

  void parse_stream(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto trimmed = detail::trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      auto fail = [&](const std::string& why) {
        throw Error(Errc::kMalformedDictionary,
                    origin + ":" + std::to_string(line_no) + ": " + why);
      };
      std::vector<std::string> cols;
      std::size_t pos = 0;
      while (true) {
        auto tab = line.find('\t', pos);
        cols.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
      }
      if (cols.size() < 2 || cols.size() > 3) fail("expected 2 or 3 tab-separated columns");
      auto kind = parse_kind(detail::trim(cols[0]));
      if (!kind) fail("unknown entity kind '" + cols[0] + "'");
      std::string canonical(detail::trim(cols[1]));
      if (canonical.empty()) fail("empty canonical name");
      std::set<std::string> aliases;
      if (cols.size() == 3) {
        std::string_view rest = cols[2];
        while (!rest.empty()) {
          auto bar = rest.find('|');
          auto alias = detail::trim(rest.substr(0, bar));
          if (!alias.empty()) aliases.emplace(alias);
          if (bar == std::string_view::npos) break;
          rest.remove_prefix(bar + 1);
        }
      }
      add(*kind, canonical, aliases);
    }
  }

  std::map<EntityKey, Entity> entities_;
  std::vector<Node> nodes_{1};
  bool built_ = false;
};

/// Tags one sentence of a section.
inline std::vector<EntityMention> tag(const SentenceUnit& sentence,
                                      const EntityDictionary& dict,
                                      std::size_t section_id = 0) {
  std::vector<EntityMention> out;
  for (const auto& m : dict.match(sentence.raw)) {
    out.push_back(EntityMention{m.entity, section_id, sentence.id, m.position,
                                sentence.raw.substr(m.position, m.length)});
  }
  return out;
}

/// Distinct entities mentioned anywhere in free text.
inline EntitySet tag_entities(std::string_view text, const EntityDictionary& dict) {
  EntitySet out;
  for (const auto& m : dict.match(text)) out.insert(m.entity);
  return out;
}

}  // namespace scisumm
