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

#include <cstdint>
#include <span>
#include <vector>

#include "omsim/catalog.hpp"
#include "omsim/cost_model.hpp"

namespace omsim {

/// One bit per catalog relation, in catalog order.
using HalfVector = std::vector<std::uint8_t>;

/// Action half followed by state half; length 2 x |relations|.
struct FeatureVector {
  std::vector<std::uint8_t> values;

  std::vector<double> as_input() const {
    return std::vector<double>(values.begin(), values.end());
  }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Bit i set iff relation i is in the set. Throws ConfigError on a
/// relation missing from the catalog.
HalfVector encode_relations(const RelationSet& relations,
                            const SchemaCatalog& catalog);

HalfVector encode_view(const View& view, const SchemaCatalog& catalog);

/// All-zeros action: create nothing.
HalfVector no_op_action(const SchemaCatalog& catalog);

/// Union of relations over all alive views.
HalfVector encode_state(std::span<const View> materialized,
                        const SchemaCatalog& catalog);

FeatureVector encode_pair(const HalfVector& action, const HalfVector& state);
FeatureVector encode_pair(const View& action, std::span<const View> state,
                          const SchemaCatalog& catalog);

struct Relabeled {
  HalfVector pre_state;
  HalfVector post_state;
};

/// Rewrites a use-time observation as if the view had just been created and
/// hit: pre = max(state - action, 0) elementwise, post = state.
Relabeled relabel(const HalfVector& state, const HalfVector& action);

}  // namespace omsim
