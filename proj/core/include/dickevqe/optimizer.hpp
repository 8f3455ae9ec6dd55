// Copyright 2026 The dickevqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <vector>

namespace dickevqe {

struct TrustRegionOptions {
    /// Initial trust-region radius.
    double rho_begin = 0.5;
    /// The search stops once the radius would shrink below this.
    double rho_end = 1e-4;
    /// Hard limit on objective evaluations.
    int max_evals = 100;
};

struct TrustRegionResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    double final_rho = 0.0;
    /// Objective value of every evaluation in call order.
    std::vector<double> history;
};

using Objective = std::function<double(const std::vector<double> &)>;

/// Derivative-free minimization with linear models on a simplex of n+1 points.
///
/// Each step fits the gradient of the linear interpolant through the simplex and tries the
/// point at distance rho downhill from the best vertex. Failed steps first repair the simplex
/// geometry and otherwise halve rho. The objective may be noisy; no step is accepted unless it
/// evaluated strictly lower.
TrustRegionResult minimize_trust_region(const Objective &f, std::vector<double> x0, const TrustRegionOptions &opts);

}  // namespace dickevqe
