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

#include "omsim/policy.hpp"

namespace omsim {

Decision creation_decision(const View& view, const DatabaseState& db,
                           const EvictionScore& score) {
  if (view.size > db.capacity()) {
    Decision d;
    d.demoted = true;
    return d;
  }
  Decision d;
  d.create = view;
  d.victims = select_victims(db, view.size, score);
  return d;
}

}  // namespace omsim
