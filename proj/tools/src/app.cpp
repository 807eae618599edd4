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

#include <cmath>
#include <iostream>

#include <CLI/CLI.hpp>

#include "mssvs/cli/commands.hpp"
#include "mssvs/error.hpp"

namespace mssvs::cli {

namespace {

const CLI::Validator kFinite(
    [](std::string &input) -> std::string {
        try {
            const double v = std::stod(input);
            return std::isfinite(v) ? std::string() : "value must be finite";
        } catch (const std::exception &) {
            return "'" + input + "' is not a number";
        }
    },
    "FINITE");

void add_circuit_options(CLI::App &cmd, circuit::CircuitParams &p, bool with_r) {
    if (with_r) {
        cmd.add_option("--r", p.r, "Input squeezing parameter r >= 0")
            ->required()
            ->check(kFinite & CLI::NonNegativeNumber);
    }
    cmd.add_option("--eta1", p.eta1, "Loss factor on the signal mode before the beam splitter")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--eta2", p.eta2, "Loss factor on the herald mode before detection")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--T", p.T, "Beam-splitter transmissivity")->required()->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--m", p.m, "Number of detected photons")->required()->check(CLI::Range(0, 1000));
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Photon-subtracted squeezed vacuum through lossy channels: closed-form observables, "
                 "parameter sweeps and Fock-space validation.",
                 "mssvs"};
    app.require_subcommand(1);
    app.fallthrough();

    RunOptions options;
    bool no_timestamp = false;
    int cutoff = 0;
    app.add_flag("--no-timestamp", no_timestamp, "Leave the generation time out of the output");
    app.add_option("--jobs", options.jobs, "Parameter points evaluated in parallel")
        ->capture_default_str()
        ->check(CLI::Range(1, 1024));
    app.add_option("--cutoff", cutoff, "Fixed Fock cutoff for the oracle (default: start at 40 and escalate)")
        ->check(CLI::Range(2, 2000));
    app.add_option("--max-points", options.max_points, "Largest sweep accepted")->capture_default_str();

    PointRequest point_req;
    auto *point_cmd = app.add_subcommand("point", "Evaluate every observable at one parameter point (JSON)");
    add_circuit_options(*point_cmd, point_req.params, true);
    point_cmd->add_option("--wigner-grid", point_req.wigner_points, "Points per axis of a square Wigner grid")
        ->check(CLI::Range(1, 2001));
    point_cmd->add_option("--range", point_req.wigner_range, "Half-width of the Wigner grid")
        ->capture_default_str()
        ->check(kFinite & CLI::PositiveNumber);
    point_cmd->add_flag("--oracle", point_req.oracle, "Also report the Fock-space oracle success probability");

    std::string spec_path;
    std::string output_path;
    auto *sweep_cmd = app.add_subcommand("sweep", "Evaluate a grid described by a spec file (CSV)");
    sweep_cmd->add_option("spec", spec_path, "Sweep spec file")->required();
    sweep_cmd->add_option("-o,--output", output_path, "CSV destination (default: standard output)");

    std::string grid_name = "standard";
    double tolerance = 1e-6;
    auto *validate_cmd = app.add_subcommand("validate", "Compare closed forms against the Fock-space oracle");
    validate_cmd->add_option("--grid", grid_name, "'standard' or a file with lines 'r eta1 eta2 T m'")
        ->capture_default_str();
    validate_cmd->add_option("--tolerance", tolerance, "Relative tolerance (absolute below 1e-2 scale)")
        ->capture_default_str()
        ->check(kFinite & CLI::PositiveNumber);

    circuit::CircuitParams threshold_params;
    auto *threshold_cmd = app.add_subcommand("threshold", "Squeezing threshold r_c where var_p crosses 1/2 (JSON)");
    add_circuit_options(*threshold_cmd, threshold_params, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    options.timestamp = !no_timestamp;
    if (cutoff > 0) {
        options.cutoff = cutoff;
    }

    try {
        if (*point_cmd) {
            out << point(point_req, options).dump(2) << '\n';
            return kExitOk;
        }
        if (*threshold_cmd) {
            const auto &p = threshold_params;
            out << threshold(p.m, p.T, p.eta1, p.eta2, options).dump(2) << '\n';
            return kExitOk;
        }
        if (*sweep_cmd) {
            SweepSpec spec;
            try {
                spec = load_sweep_spec(spec_path);
            } catch (const SpecParseError &e) {
                err << spec_path << ": " << e.what() << '\n';
                return kExitUsage;
            }
            const ResultTable table = sweep(spec, options);
            if (output_path.empty()) {
                table.write_csv(out);
            } else {
                table.write_csv_atomic(output_path);
            }
            return kExitOk;
        }
        if (*validate_cmd) {
            std::vector<circuit::CircuitParams> grid;
            if (grid_name == "standard") {
                grid = standard_grid();
            } else {
                try {
                    grid = load_grid_file(grid_name);
                } catch (const SpecParseError &e) {
                    err << grid_name << ": " << e.what() << '\n';
                    return kExitUsage;
                }
            }
            const ValidationReport report = validate(grid, tolerance, options);
            out << report.to_json().dump(2) << '\n';
            for (std::size_t i : report.failures) {
                const auto &d = report.points[i];
                err << "FAIL " << d.params.describe() << " cutoff=" << d.cutoff << " max deviation " << d.worst()
                    << '\n';
            }
            return report.passed() ? kExitOk : kExitValidationFailed;
        }
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractViolation &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapacityError &e) {
        err << "error: " << e.what() << '\n';
        return kExitCapExceeded;
    } catch (const TruncationError &e) {
        err << "error: " << e.what() << '\n';
        return kExitCapExceeded;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidationFailed;
    }
    return kExitUsage;
}

} // namespace mssvs::cli
