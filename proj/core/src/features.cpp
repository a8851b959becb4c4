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

#include "omsim/features.hpp"

#include "omsim/errors.hpp"

namespace omsim {

HalfVector encode_relations(const RelationSet& relations,
                            const SchemaCatalog& catalog) {
  HalfVector bits(catalog.relation_count(), 0);
  for (RelationId r : relations) bits[catalog.relation_position(r)] = 1;
  return bits;
}

HalfVector encode_view(const View& view, const SchemaCatalog& catalog) {
  return encode_relations(view.relations, catalog);
}

HalfVector no_op_action(const SchemaCatalog& catalog) {
  return HalfVector(catalog.relation_count(), 0);
}

HalfVector encode_state(std::span<const View> materialized,
                        const SchemaCatalog& catalog) {
  HalfVector bits(catalog.relation_count(), 0);
  for (const View& v : materialized) {
    for (RelationId r : v.relations) bits[catalog.relation_position(r)] = 1;
  }
  return bits;
}

FeatureVector encode_pair(const HalfVector& action, const HalfVector& state) {
  if (action.size() != state.size()) {
    throw ConfigError("action and state halves differ in width");
  }
  FeatureVector f;
  f.values.reserve(action.size() * 2);
  f.values.insert(f.values.end(), action.begin(), action.end());
  f.values.insert(f.values.end(), state.begin(), state.end());
  return f;
}

FeatureVector encode_pair(const View& action, std::span<const View> state,
                          const SchemaCatalog& catalog) {
  return encode_pair(encode_view(action, catalog),
                     encode_state(state, catalog));
}

Relabeled relabel(const HalfVector& state, const HalfVector& action) {
  if (action.size() != state.size()) {
    throw ConfigError("action and state halves differ in width");
  }
  Relabeled out{state, state};
  for (std::size_t i = 0; i < state.size(); ++i) {
    out.pre_state[i] = (state[i] == 1 && action[i] == 0) ? 1 : 0;
  }
  return out;
}

}  // namespace omsim
