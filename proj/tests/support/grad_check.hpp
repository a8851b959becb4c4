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

#include "omsim/qnet.hpp"

namespace omsim::testing {

/// ||analytic - numeric|| / (||analytic|| + ||numeric||) for d(output)/d(params)
/// at `input`, numeric by central differences with step `h`. Zero when both
/// gradients vanish.
double gradient_relative_error(const Mlp& net, std::span<const double> input,
                               double h = 1e-6);

/// Same, for the batch loss gradient.
double loss_gradient_relative_error(const Mlp& net,
                                    std::span<const TrainingExample> batch,
                                    double h = 1e-6);

}  // namespace omsim::testing
