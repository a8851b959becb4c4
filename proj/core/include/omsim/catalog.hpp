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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omsim/ids.hpp"

namespace omsim {

struct Relation {
  RelationId id{};
  Rows cardinality = 1;
  Bytes row_width = 1;
};

/// Equality join predicate between two base relations.
struct Predicate {
  PredicateId id{};
  RelationId left{};
  RelationId right{};
  double selectivity = 1.0;

  RelationSet relations() const { return RelationSet{left, right}; }
};

/// Base relations and join predicates. Every cost in the simulator is
/// derived from this table, so it is immutable once built.
class SchemaCatalog {
 public:
  /// Validates and builds a catalog. Throws ConfigError on duplicate ids,
  /// non-positive cardinality/width, selectivity outside (0,1], self-joins,
  /// dangling relation references, or a second predicate on one pair.
  static SchemaCatalog create(std::vector<Relation> relations,
                              std::vector<Predicate> predicates);

  /// Parses the plain-text format:
  ///   R <id> <cardinality> <row_width>
  ///   P <id> <relA> <relB> <selectivity>
  /// Blank lines and lines starting with '#' are ignored. Errors carry the
  /// 1-based line number.
  static SchemaCatalog parse(std::istream& in);
  static SchemaCatalog load(const std::string& path);

  void write(std::ostream& out) const;

  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const std::vector<Predicate>& predicates() const noexcept {
    return predicates_;
  }

  const Relation& relation(RelationId id) const;
  const Predicate& predicate(PredicateId id) const;
  bool has_relation(RelationId id) const { return relation_index_.count(id); }
  bool has_predicate(PredicateId id) const {
    return predicate_index_.count(id);
  }

  /// Position of the relation in the fixed catalog order (ascending id).
  std::size_t relation_position(RelationId id) const;
  std::size_t relation_count() const noexcept { return relations_.size(); }

  std::optional<PredicateId> predicate_between(RelationId a,
                                               RelationId b) const;

  /// Union of predicate endpoints.
  RelationSet relations_of(const PredicateSet& predicates) const;

  /// True when the predicates form one connected join graph over their
  /// endpoints. The empty set is not connected.
  bool is_connected(const PredicateSet& predicates) const;

 private:
  std::vector<Relation> relations_;
  std::vector<Predicate> predicates_;
  std::map<RelationId, std::size_t> relation_index_;
  std::map<PredicateId, std::size_t> predicate_index_;
};

/// The desk-scale catalog shipped with the project (data/desk.catalog):
/// a 10-relation snowflake schema.
SchemaCatalog desk_catalog();

/// The three-relation catalog used in the cost-model examples:
/// |A|=100, |B|=200, |C|=50, p1(A,B) sel 0.01, p2(B,C) sel 0.02.
SchemaCatalog toy_catalog();

}  // namespace omsim
