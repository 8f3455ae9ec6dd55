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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dickevqe/problem.hpp"
#include "dickevqe/vqe.hpp"

namespace dickevqe::cli {

/// Validation failure carrying a `file:line:` prefix when the offending key can be located.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ProblemSource {
    /// synthetic | csv | planted | graph | snapshot
    std::string kind = "synthetic";
    int n = 12;
    int budget = -1;
    double q = 0.9;
    uint64_t seed = 1000;
    std::string path;
    CostMode cost_mode = CostMode::Full;
    /// none | variance | return (portfolios); none | laplacian (graphs)
    std::string reorder = "return";
    double p_edge = 0.4;
    uint64_t seed_graph = 1000;
    uint64_t seed_weights = 123;
    double offset = 0.0;
    bool fixed_top_bit = true;
};

struct RunConfig {
    ProblemSource problem;
    /// soft | hard
    std::string mode = "soft";
    int depth = 2;
    uint64_t cell_cap = 10'000'000;
    int cruciform_iters = 0;
    /// Identical initial angle in units of pi; unset selects the close-to-solution rule.
    std::optional<double> theta_init_pi;
    double alpha_start = 0.01;
    double alpha_cap = 1.0;
    std::vector<double> alpha_schedule;
    int shots = 1024;
    CorrelationSchedule schedule;
    int greedy_restarts = 4;
    int curve_points = 21;
    int curve_n = 18;
    int curve_k = 9;
    bool curve_include_ends = false;
    StudyConfig study;
    uint64_t seed = 1;

    /// The config with every default filled in, as embedded in outputs.
    nlohmann::json resolved() const;
    /// Alpha per iteration: the explicit list or the geometric schedule.
    std::vector<double> alphas() const;
};

/// Parses and validates a config document. `source` names the file in error messages.
RunConfig parse_run_config(const std::string &text, const std::string &source);

}  // namespace dickevqe::cli
