// Copyright 2026 The omsim Authors.
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

#include "omsim/catalog.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "omsim/errors.hpp"

namespace omsim {
namespace {

std::string relation_name(RelationId id) {
  return "relation " + std::to_string(to_underlying(id));
}

}  // namespace

SchemaCatalog SchemaCatalog::create(std::vector<Relation> relations,
                                    std::vector<Predicate> predicates) {
  SchemaCatalog catalog;
  std::sort(relations.begin(), relations.end(),
            [](const Relation& a, const Relation& b) { return a.id < b.id; });
  std::sort(predicates.begin(), predicates.end(),
            [](const Predicate& a, const Predicate& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < relations.size(); ++i) {
    const Relation& r = relations[i];
    if (r.cardinality < 1) {
      throw ConfigError(relation_name(r.id) + ": cardinality must be >= 1");
    }
    if (r.row_width < 1) {
      throw ConfigError(relation_name(r.id) + ": row width must be >= 1");
    }
    if (!catalog.relation_index_.emplace(r.id, i).second) {
      throw ConfigError("duplicate " + relation_name(r.id));
    }
  }
  catalog.relations_ = std::move(relations);

  std::map<std::pair<RelationId, RelationId>, PredicateId> pairs;
  for (std::size_t i = 0; i < predicates.size(); ++i) {
    Predicate& p = predicates[i];
    const std::string name = "predicate " + std::to_string(to_underlying(p.id));
    if (!(p.selectivity > 0.0 && p.selectivity <= 1.0)) {
      throw ConfigError(name + ": selectivity must be in (0, 1]");
    }
    if (p.left == p.right) {
      throw ConfigError(name + ": must reference two distinct relations");
    }
    if (!catalog.has_relation(p.left) || !catalog.has_relation(p.right)) {
      throw ConfigError(name + ": references an unknown relation");
    }
    if (p.right < p.left) std::swap(p.left, p.right);
    if (!pairs.emplace(std::pair{p.left, p.right}, p.id).second) {
      throw ConfigError(name + ": relation pair already has a predicate");
    }
    if (!catalog.predicate_index_.emplace(p.id, i).second) {
      throw ConfigError("duplicate " + name);
    }
  }
  catalog.predicates_ = std::move(predicates);
  return catalog;
}

SchemaCatalog SchemaCatalog::parse(std::istream& in) {
  std::vector<Relation> relations;
  std::vector<Predicate> predicates;
  std::map<RelationId, int> relation_lines;
  std::vector<int> predicate_lines;
  std::string line;
  int line_no = 0;
  auto fail = [](int at, const std::string& why) {
    throw ConfigError("catalog line " + std::to_string(at) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "R") {
      std::int64_t id = 0;
      Relation r;
      if (!(fields >> id >> r.cardinality >> r.row_width)) {
        fail(line_no, "expected 'R <id> <cardinality> <row_width>'");
      }
      r.id = RelationId{static_cast<std::int32_t>(id)};
      if (r.cardinality < 1) fail(line_no, "cardinality must be >= 1");
      if (r.row_width < 1) fail(line_no, "row width must be >= 1");
      if (!relation_lines.emplace(r.id, line_no).second) {
        fail(line_no, "duplicate " + relation_name(r.id));
      }
      relations.push_back(r);
    } else if (tag == "P") {
      std::int64_t id = 0, a = 0, b = 0;
      Predicate p;
      if (!(fields >> id >> a >> b >> p.selectivity)) {
        fail(line_no, "expected 'P <id> <relA> <relB> <selectivity>'");
      }
      p.id = PredicateId{static_cast<std::int32_t>(id)};
      p.left = RelationId{static_cast<std::int32_t>(a)};
      p.right = RelationId{static_cast<std::int32_t>(b)};
      if (!(p.selectivity > 0.0 && p.selectivity <= 1.0)) {
        fail(line_no, "selectivity must be in (0, 1]");
      }
      if (p.left == p.right) fail(line_no, "predicate joins a relation to itself");
      predicates.push_back(p);
      predicate_lines.push_back(line_no);
    } else {
      fail(line_no, "unknown record tag '" + tag + "'");
    }
    std::string extra;
    if (fields >> extra) fail(line_no, "trailing field '" + extra + "'");
  }

  // Cross-record checks, reported against the offending predicate's line.
  std::map<PredicateId, int> seen_ids;
  std::map<std::pair<RelationId, RelationId>, int> seen_pairs;
  for (std::size_t i = 0; i < predicates.size(); ++i) {
    const Predicate& p = predicates[i];
    const int at = predicate_lines[i];
    if (!relation_lines.count(p.left) || !relation_lines.count(p.right)) {
      fail(at, "predicate references an unknown relation");
    }
    if (!seen_ids.emplace(p.id, at).second) {
      fail(at, "duplicate predicate " + std::to_string(to_underlying(p.id)));
    }
    auto key = std::minmax(p.left, p.right);
    if (!seen_pairs.emplace(std::pair{key.first, key.second}, at).second) {
      fail(at, "relation pair already has a predicate");
    }
  }
  return create(std::move(relations), std::move(predicates));
}

SchemaCatalog SchemaCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog file '" + path + "'");
  return parse(in);
}

void SchemaCatalog::write(std::ostream& out) const {
  for (const Relation& r : relations_) {
    out << "R " << to_underlying(r.id) << ' ' << r.cardinality << ' '
        << r.row_width << '\n';
  }
  for (const Predicate& p : predicates_) {
    std::ostringstream sel;
    sel.precision(17);
    sel << p.selectivity;
    out << "P " << to_underlying(p.id) << ' ' << to_underlying(p.left) << ' '
        << to_underlying(p.right) << ' ' << sel.str() << '\n';
  }
}

const Relation& SchemaCatalog::relation(RelationId id) const {
  auto it = relation_index_.find(id);
  if (it == relation_index_.end()) {
    throw ConfigError("unknown " + relation_name(id));
  }
  return relations_[it->second];
}

const Predicate& SchemaCatalog::predicate(PredicateId id) const {
  auto it = predicate_index_.find(id);
  if (it == predicate_index_.end()) {
    throw ConfigError("unknown predicate " + std::to_string(to_underlying(id)));
  }
  return predicates_[it->second];
}

std::size_t SchemaCatalog::relation_position(RelationId id) const {
  auto it = relation_index_.find(id);
  if (it == relation_index_.end()) {
    throw ConfigError("unknown " + relation_name(id));
  }
  return it->second;
}

std::optional<PredicateId> SchemaCatalog::predicate_between(
    RelationId a, RelationId b) const {
  if (b < a) std::swap(a, b);
  for (const Predicate& p : predicates_) {
    if (p.left == a && p.right == b) return p.id;
  }
  return std::nullopt;
}

RelationSet SchemaCatalog::relations_of(const PredicateSet& predicates) const {
  RelationSet out;
  for (PredicateId id : predicates) {
    const Predicate& p = predicate(id);
    out.insert(p.left);
    out.insert(p.right);
  }
  return out;
}

bool SchemaCatalog::is_connected(const PredicateSet& predicates) const {
  if (predicates.empty()) return false;
  std::vector<const Predicate*> edges;
  edges.reserve(predicates.size());
  for (PredicateId id : predicates) edges.push_back(&predicate(id));

  RelationSet reached{edges.front()->left, edges.front()->right};
  std::vector<bool> used(edges.size(), false);
  used[0] = true;
  std::size_t used_count = 1;
  bool grew = true;
  while (grew && used_count < edges.size()) {
    grew = false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (used[i]) continue;
      if (reached.contains(edges[i]->left) ||
          reached.contains(edges[i]->right)) {
        reached.insert(edges[i]->left);
        reached.insert(edges[i]->right);
        used[i] = true;
        ++used_count;
        grew = true;
      }
    }
  }
  return used_count == edges.size();
}

// Same text as data/desk.catalog; a test keeps the two in sync.
constexpr const char* kDeskCatalog = R"(# Desk-scale snowflake schema.
# R <id> <cardinality> <row_width>
R 0 50000 32
R 1 2000 64
R 2 1000 64
R 3 500 48
R 4 200 48
R 5 100 32
R 6 60 32
R 7 40 32
R 8 20 24
R 9 10 24
# P <id> <left> <right> <selectivity>
P 1 0 1 0.0001
P 2 0 2 0.0002
P 3 0 3 0.0004
P 4 0 4 0.001
P 5 1 5 0.01
P 6 1 6 0.0166666666666667
P 7 2 7 0.025
P 8 3 8 0.05
P 9 4 9 0.1
)";

SchemaCatalog desk_catalog() {
  std::istringstream in(kDeskCatalog);
  return SchemaCatalog::parse(in);
}

SchemaCatalog toy_catalog() {
  return SchemaCatalog::create(
      {{RelationId{1}, 100, 8}, {RelationId{2}, 200, 8}, {RelationId{3}, 50, 8}},
      {{PredicateId{1}, RelationId{1}, RelationId{2}, 0.01},
       {PredicateId{2}, RelationId{2}, RelationId{3}, 0.02}});
}

}  // namespace omsim
