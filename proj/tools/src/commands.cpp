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

#include "mssvs/cli/commands.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mssvs/error.hpp"
#include "mssvs/fock_oracle.hpp"
#include "mssvs/observables.hpp"
#include "support.hpp"

namespace mssvs::cli {

namespace {

Json params_json(const circuit::CircuitParams &p) {
    return Json{{"r", p.r}, {"eta1", p.eta1}, {"eta2", p.eta2}, {"T", p.T}, {"m", p.m}};
}

void stamp(Json &doc, const RunOptions &options) {
    doc["version"] = detail::version();
    if (options.timestamp) {
        doc["generated"] = detail::utc_timestamp();
    }
}

fock::OracleConfig oracle_config(const RunOptions &options) {
    fock::OracleConfig config;
    if (options.cutoff) {
        config.cutoff = *options.cutoff;
        config.auto_escalate = false;
    }
    return config;
}

} // namespace

Json point(const PointRequest &request, const RunOptions &options) {
    const circuit::CircuitParams &params = request.params;
    params.validate();
    const observables::HeraldedState state(params);
    const double p_d = state.success_probability();
    const bool possible = p_d >= kHeraldFloor;

    Json doc;
    doc["params"] = params_json(params);
    doc["p_d"] = possible ? p_d : 0.0;
    doc["herald_possible"] = possible;
    if (possible) {
        const auto v = state.variances();
        doc["var_x"] = v.var_x;
        doc["var_p"] = v.var_p;
        const auto dist = state.pnd_distribution();
        doc["pnd"] = dist.probabilities;
        doc["pnd_cumulative"] = dist.cumulative;
    } else {
        doc["var_x"] = nullptr;
        doc["var_p"] = nullptr;
        doc["pnd"] = nullptr;
        doc["pnd_cumulative"] = nullptr;
    }

    if (request.wigner_points > 0) {
        if (!possible) {
            doc["wigner"] = nullptr;
        } else {
            const auto grid = observables::GridSpec::square(request.wigner_range, request.wigner_points);
            const auto points = state.wigner_grid(grid);
            Json xs = Json::array();
            Json ys = Json::array();
            for (int i = 0; i < grid.nx; ++i) {
                xs.push_back(grid.x_at(i));
            }
            for (int j = 0; j < grid.ny; ++j) {
                ys.push_back(grid.y_at(j));
            }
            Json w = Json::array();
            for (int i = 0; i < grid.nx; ++i) {
                Json row = Json::array();
                for (int j = 0; j < grid.ny; ++j) {
                    row.push_back(points[static_cast<std::size_t>(i * grid.ny + j)].w);
                }
                w.push_back(std::move(row));
            }
            doc["wigner"] = Json{{"range", request.wigner_range},
                                 {"points", request.wigner_points},
                                 {"x", std::move(xs)},
                                 {"y", std::move(ys)},
                                 {"w", std::move(w)}};
        }
    }

    if (request.oracle) {
        const auto res = fock::simulate(params, oracle_config(options));
        doc["oracle"] = Json{{"p_d", res.p_d}, {"cutoff", res.cutoff}};
    }
    stamp(doc, options);
    return doc;
}

Json threshold(int m, double T, double eta1, double eta2, const RunOptions &options) {
    circuit::CircuitParams{0.0, eta1, eta2, T, m}.validate();
    const auto res = observables::squeezing_threshold(m, T, eta1, eta2);
    Json doc;
    doc["m"] = m;
    doc["T"] = T;
    doc["eta1"] = eta1;
    doc["eta2"] = eta2;
    doc["r_c"] = res.r_c ? Json(*res.r_c) : Json(nullptr);
    doc["kind"] = std::string(observables::to_string(res.kind));
    doc["iterations"] = res.iterations;
    stamp(doc, options);
    return doc;
}

ResultTable sweep(const SweepSpec &spec, const RunOptions &options) {
    const std::size_t rows = spec.row_count();
    if (rows > options.max_points) {
        throw CapacityError("sweep has " + std::to_string(rows) + " rows, cap is " +
                            std::to_string(options.max_points) + " (raise with --max-points)");
    }

    std::vector<std::string> columns;
    for (Param p : kAllParams) {
        columns.emplace_back(param_name(p));
    }
    const bool wigner = spec.wants(Observable::wigner);
    if (wigner) {
        columns.emplace_back("x");
        columns.emplace_back("y");
    }
    if (spec.wants(Observable::prob)) {
        columns.emplace_back("p_d");
    }
    if (spec.wants(Observable::variances)) {
        columns.emplace_back("var_x");
        columns.emplace_back("var_p");
    }
    if (spec.wants(Observable::threshold)) {
        columns.emplace_back("r_c");
        columns.emplace_back("threshold_kind");
    }
    if (spec.wants(Observable::pnd)) {
        for (int n = 0; n <= spec.pnd_max; ++n) {
            columns.push_back("pnd_" + std::to_string(n));
        }
    }
    if (wigner) {
        columns.emplace_back("W");
    }

    // The threshold depends only on (m, T, η₁, η₂); share it across r.
    std::mutex threshold_mutex;
    std::map<std::tuple<int, double, double, double>, observables::ThresholdResult> threshold_cache;
    auto threshold_for = [&](const circuit::CircuitParams &p) -> std::optional<observables::ThresholdResult> {
        const auto key = std::make_tuple(p.m, p.T, p.eta1, p.eta2);
        {
            const std::lock_guard lock(threshold_mutex);
            if (auto it = threshold_cache.find(key); it != threshold_cache.end()) {
                return it->second;
            }
        }
        try {
            auto res = observables::squeezing_threshold(p.m, p.T, p.eta1, p.eta2);
            const std::lock_guard lock(threshold_mutex);
            threshold_cache.emplace(key, res);
            return res;
        } catch (const UndefinedStateError &) {
            return std::nullopt;
        }
    };

    const std::size_t points = spec.parameter_points();
    const std::size_t per_point = rows / std::max<std::size_t>(points, 1);
    std::vector<std::vector<std::vector<Cell>>> blocks(points);

    detail::parallel_for(points, options.jobs, [&](std::size_t idx) {
        const circuit::CircuitParams params = spec.params_at(idx);
        const observables::HeraldedState state(params);
        const double p_d = state.success_probability();
        const bool possible = p_d >= kHeraldFloor;

        std::vector<Cell> common = {params.r, params.eta1, params.eta2, params.T, static_cast<long long>(params.m)};
        std::vector<Cell> tail;
        if (spec.wants(Observable::prob)) {
            tail.emplace_back(possible ? p_d : 0.0);
        }
        if (spec.wants(Observable::variances)) {
            if (possible) {
                const auto v = state.variances();
                tail.emplace_back(v.var_x);
                tail.emplace_back(v.var_p);
            } else {
                tail.resize(tail.size() + 2);
            }
        }
        if (spec.wants(Observable::threshold)) {
            const auto res = threshold_for(params);
            if (res && res->r_c) {
                tail.emplace_back(*res->r_c);
            } else {
                tail.emplace_back();
            }
            if (res) {
                tail.emplace_back(std::string(observables::to_string(res->kind)));
            } else {
                tail.emplace_back();
            }
        }
        if (spec.wants(Observable::pnd)) {
            if (possible) {
                for (double v : state.pnd_range(spec.pnd_max)) {
                    tail.emplace_back(v);
                }
            } else {
                tail.resize(tail.size() + static_cast<std::size_t>(spec.pnd_max) + 1);
            }
        }

        auto &block = blocks[idx];
        block.reserve(per_point);
        if (!wigner) {
            std::vector<Cell> row = common;
            row.insert(row.end(), tail.begin(), tail.end());
            block.push_back(std::move(row));
            return;
        }
        for (double x : spec.wigner_x) {
            for (double y : spec.wigner_y) {
                std::vector<Cell> row = common;
                row.emplace_back(x);
                row.emplace_back(y);
                row.insert(row.end(), tail.begin(), tail.end());
                if (possible) {
                    row.emplace_back(state.wigner(x, y).w);
                } else {
                    row.emplace_back();
                }
                block.push_back(std::move(row));
            }
        }
    });

    ResultTable table(std::move(columns));
    table.add_metadata("tool", std::string("mssvs ") + detail::version());
    table.add_metadata("method", "closed form (no Fock truncation)");
    table.add_metadata("pnd_tail_tolerance", format_double(observables::PndOptions{}.tail_tolerance));
    table.add_metadata("threshold_tolerance", format_double(observables::ThresholdOptions{}.tolerance));
    table.add_metadata("herald_floor", format_double(kHeraldFloor));
    table.add_metadata("rows", std::to_string(rows));
    if (options.timestamp) {
        table.add_metadata("generated", detail::utc_timestamp());
    }
    for (auto &block : blocks) {
        for (auto &row : block) {
            table.add_row(std::move(row));
        }
    }
    return table;
}

} // namespace mssvs::cli
