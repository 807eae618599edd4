// Copyright 2026 The mssvs Authors
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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mssvs/circuit.hpp"
#include "mssvs/cli/result_table.hpp"
#include "mssvs/cli/sweep_spec.hpp"

namespace mssvs::cli {

using Json = nlohmann::ordered_json;

/// Exit codes of the `mssvs` executable.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitUsage = 2,
    kExitCapExceeded = 3,
};

/// Points with p_d below this are reported as herald-impossible.
inline constexpr double kHeraldFloor = 1e-14;

struct RunOptions {
    bool timestamp = true;
    int jobs = 1;
    /// Fixed oracle cutoff; unset means start at 40 and escalate as needed.
    std::optional<int> cutoff;
    std::size_t max_points = 1'000'000;
};

struct PointRequest {
    circuit::CircuitParams params;
    int wigner_points = 0; ///< 0 disables the grid
    double wigner_range = 3.0;
    bool oracle = false;
};

[[nodiscard]] Json point(const PointRequest &request, const RunOptions &options);

/// Throws CapacityError when the sweep has more than options.max_points rows.
[[nodiscard]] ResultTable sweep(const SweepSpec &spec, const RunOptions &options);

[[nodiscard]] Json threshold(int m, double T, double eta1, double eta2, const RunOptions &options);

/// Deviation of each observable group at one point, measured as
/// |closed − oracle| / max(|oracle|, 1e-2).
struct PointDeviation {
    circuit::CircuitParams params;
    int cutoff = 0;
    bool closed_possible = true;
    bool oracle_possible = true;
    double p_d = 0.0;
    double pnd = 0.0;
    double variances = 0.0;
    double wigner = 0.0;

    [[nodiscard]] double worst() const;
};

struct ValidationReport {
    double tolerance = 1e-6;
    std::vector<PointDeviation> points;
    std::vector<std::size_t> failures; ///< indices into points

    [[nodiscard]] bool passed() const noexcept { return failures.empty(); }
    [[nodiscard]] Json to_json() const;
};

/// r ∈ {0.3, 0.7, 1.0} × T ∈ {0.8, 0.97} × (η₁, η₂) ∈ {(0,0), (0.1,0.1), (0.3,0.05)} × m ∈ {0…3}.
[[nodiscard]] std::vector<circuit::CircuitParams> standard_grid();
/// One point per line: `r eta1 eta2 T m`, separated by spaces or commas.
/// Blank lines and `#` comments are skipped. Throws SpecParseError when the
/// file holds no points.
[[nodiscard]] std::vector<circuit::CircuitParams> load_grid_file(const std::filesystem::path &path);

[[nodiscard]] PointDeviation compare_with_oracle(const circuit::CircuitParams &params, const RunOptions &options);
[[nodiscard]] ValidationReport validate(const std::vector<circuit::CircuitParams> &grid, double tolerance,
                                        const RunOptions &options);

/// Entry point behind the executable; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace mssvs::cli
