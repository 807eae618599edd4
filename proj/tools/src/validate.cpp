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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mssvs/cli/commands.hpp"
#include "mssvs/error.hpp"
#include "mssvs/fock_oracle.hpp"
#include "mssvs/observables.hpp"
#include "support.hpp"

namespace mssvs::cli {

namespace {

constexpr int kValidationPndMax = 10;
constexpr double kRelativeFloor = 1e-2;

double deviation(double closed, double oracle) {
    return std::abs(closed - oracle) / std::max(std::abs(oracle), kRelativeFloor);
}

observables::GridSpec validation_wigner_grid() { return observables::GridSpec{-2.0, 2.0, -2.0, 2.0, 5, 5}; }

} // namespace

double PointDeviation::worst() const {
    if (closed_possible != oracle_possible) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max({p_d, pnd, variances, wigner});
}

std::vector<circuit::CircuitParams> standard_grid() {
    std::vector<circuit::CircuitParams> grid;
    const double rs[] = {0.3, 0.7, 1.0};
    const double ts[] = {0.8, 0.97};
    const std::pair<double, double> etas[] = {{0.0, 0.0}, {0.1, 0.1}, {0.3, 0.05}};
    for (double r : rs) {
        for (double T : ts) {
            for (const auto &[eta1, eta2] : etas) {
                for (int m = 0; m <= 3; ++m) {
                    grid.push_back({r, eta1, eta2, T, m});
                }
            }
        }
    }
    return grid;
}

std::vector<circuit::CircuitParams> load_grid_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecParseError("cannot open grid file " + path.string(), 0, 0);
    }
    std::vector<circuit::CircuitParams> grid;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::vector<std::pair<double, int>> fields;
        std::size_t pos = 0;
        while (pos < line.size()) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) {
                break;
            }
            const std::size_t end = std::min(line.find_first_of(" \t\r", pos), line.size());
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, v);
            if (ec != std::errc() || ptr != line.data() + end || !std::isfinite(v)) {
                throw SpecParseError("'" + line.substr(pos, end - pos) + "' is not a finite number", line_no,
                                     static_cast<int>(pos) + 1);
            }
            fields.emplace_back(v, static_cast<int>(pos) + 1);
            pos = end;
        }
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 5) {
            throw SpecParseError("expected 5 values (r eta1 eta2 T m), found " + std::to_string(fields.size()),
                                 line_no, fields.front().second);
        }
        if (fields[4].first != std::floor(fields[4].first) || fields[4].first < 0) {
            throw SpecParseError("m must be a non-negative integer", line_no, fields[4].second);
        }
        circuit::CircuitParams p{fields[0].first, fields[1].first, fields[2].first, fields[3].first,
                                 static_cast<int>(fields[4].first)};
        try {
            p.validate();
        } catch (const DomainError &e) {
            throw SpecParseError(e.what(), line_no, fields.front().second);
        }
        grid.push_back(p);
    }
    if (grid.empty()) {
        throw SpecParseError("grid file " + path.string() + " contains no points", std::max(line_no, 1), 1);
    }
    return grid;
}

PointDeviation compare_with_oracle(const circuit::CircuitParams &params, const RunOptions &options) {
    PointDeviation dev;
    dev.params = params;

    fock::OracleConfig config;
    if (options.cutoff) {
        config.cutoff = *options.cutoff;
        config.auto_escalate = false;
    }
    const fock::OracleResult oracle = fock::simulate(params, config);
    dev.cutoff = oracle.cutoff;

    const observables::HeraldedState closed(params);
    const double p_closed = closed.success_probability();
    dev.closed_possible = p_closed >= kHeraldFloor;
    dev.oracle_possible = oracle.state.has_value();
    dev.p_d = deviation(p_closed, oracle.p_d);
    if (!dev.closed_possible || !dev.oracle_possible) {
        return dev;
    }

    const fock::OracleObservables obs = fock::oracle_observables(*oracle.state);
    const std::vector<double> pnd = closed.pnd_range(kValidationPndMax);
    for (int n = 0; n <= kValidationPndMax; ++n) {
        const double reference = n < oracle.state->cutoff() ? obs.pnd[static_cast<std::size_t>(n)] : 0.0;
        dev.pnd = std::max(dev.pnd, deviation(pnd[static_cast<std::size_t>(n)], reference));
    }
    const auto v = closed.variances();
    dev.variances = std::max(deviation(v.var_x, obs.variances.var_x), deviation(v.var_p, obs.variances.var_p));
    const auto grid = validation_wigner_grid();
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.ny; ++j) {
            const double x = grid.x_at(i);
            const double y = grid.y_at(j);
            dev.wigner = std::max(dev.wigner, deviation(closed.wigner(x, y).w, fock::wigner(*oracle.state, x, y)));
        }
    }
    return dev;
}

ValidationReport validate(const std::vector<circuit::CircuitParams> &grid, double tolerance,
                          const RunOptions &options) {
    ValidationReport report;
    report.tolerance = tolerance;
    report.points.resize(grid.size());
    detail::parallel_for(grid.size(), options.jobs,
                         [&](std::size_t i) { report.points[i] = compare_with_oracle(grid[i], options); });
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        if (!(report.points[i].worst() <= tolerance)) {
            report.failures.push_back(i);
        }
    }
    return report;
}

Json ValidationReport::to_json() const {
    Json doc;
    doc["tolerance"] = tolerance;
    doc["relative_floor"] = kRelativeFloor;
    Json list = Json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointDeviation &d = points[i];
        Json entry;
        entry["r"] = d.params.r;
        entry["eta1"] = d.params.eta1;
        entry["eta2"] = d.params.eta2;
        entry["T"] = d.params.T;
        entry["m"] = d.params.m;
        entry["cutoff"] = d.cutoff;
        entry["herald_possible"] = d.closed_possible && d.oracle_possible;
        entry["max_dev"] = Json{{"p_d", d.p_d}, {"pnd", d.pnd}, {"variances", d.variances}, {"wigner", d.wigner}};
        entry["pass"] = d.worst() <= tolerance;
        list.push_back(std::move(entry));
    }
    doc["points"] = std::move(list);
    doc["failures"] = failures.size();
    doc["passed"] = passed();
    return doc;
}

} // namespace mssvs::cli
