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

#include "mssvs/cli/sweep_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mssvs::cli {

namespace {

constexpr std::array<std::string_view, 5> kParamNames = {"r", "eta1", "eta2", "T", "m"};
constexpr std::array<std::string_view, 5> kObservableNames = {"prob", "variances", "threshold", "pnd", "wigner"};

std::size_t slot(Param p) { return static_cast<std::size_t>(p); }

// A piece of the input with its 1-based column.
struct Token {
    std::string_view text;
    int column = 1;
};

Token trim(Token t) {
    while (!t.text.empty() && (t.text.front() == ' ' || t.text.front() == '\t')) {
        t.text.remove_prefix(1);
        ++t.column;
    }
    while (!t.text.empty() && (t.text.back() == ' ' || t.text.back() == '\t' || t.text.back() == '\r')) {
        t.text.remove_suffix(1);
    }
    return t;
}

std::vector<Token> split(Token t, char sep) {
    std::vector<Token> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = t.text.find(sep, start);
        const std::size_t end = pos == std::string_view::npos ? t.text.size() : pos;
        parts.push_back(trim(Token{t.text.substr(start, end - start), t.column + static_cast<int>(start)}));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

class LineParser {
  public:
    explicit LineParser(int line) : line_(line) {}

    [[noreturn]] void fail(const std::string &message, int column) const {
        throw SpecParseError(message, line_, column);
    }

    double number(Token t) const {
        if (t.text.empty()) {
            fail("expected a number", t.column);
        }
        double value = 0.0;
        const char *first = t.text.data();
        const char *last = first + t.text.size();
        if (*first == '+') {
            ++first;
        }
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
            fail("'" + std::string(t.text) + "' is not a finite number", t.column);
        }
        return value;
    }

    int integer(Token t) const {
        const double v = number(t);
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            fail("'" + std::string(t.text) + "' is not an integer", t.column);
        }
        return static_cast<int>(v);
    }

    // `start:stop:count` or `v1, v2, ...`
    std::vector<std::pair<double, int>> values(Token t) const {
        std::vector<std::pair<double, int>> out;
        if (t.text.find(':') != std::string_view::npos) {
            const auto parts = split(t, ':');
            if (parts.size() != 3) {
                fail("range must be start:stop:count", t.column);
            }
            const double start = number(parts[0]);
            const double stop = number(parts[1]);
            const int count = integer(parts[2]);
            if (count < 1) {
                fail("range count must be at least 1", parts[2].column);
            }
            for (double v : linspace(start, stop, count)) {
                out.emplace_back(v, t.column);
            }
            return out;
        }
        for (const Token &item : split(t, ',')) {
            out.emplace_back(number(item), item.column);
        }
        return out;
    }

    void check_domain(Param p, double v, int column) const {
        const std::string name(param_name(p));
        switch (p) {
        case Param::r:
            if (v < 0.0) {
                fail(name + " must be non-negative", column);
            }
            break;
        case Param::eta1:
        case Param::eta2:
        case Param::T:
            if (v < 0.0 || v > 1.0) {
                fail(name + " must lie in [0, 1]", column);
            }
            break;
        case Param::m:
            if (v < 0.0 || v != std::floor(v)) {
                fail("m must be a non-negative integer", column);
            }
            break;
        }
    }

  private:
    int line_;
};

} // namespace

std::string_view param_name(Param p) noexcept { return kParamNames[slot(p)]; }

std::optional<Param> parse_param(std::string_view name) noexcept {
    for (Param p : kAllParams) {
        if (param_name(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::string_view observable_name(Observable o) noexcept { return kObservableNames[static_cast<std::size_t>(o)]; }

std::optional<Observable> parse_observable(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kObservableNames.size(); ++i) {
        if (kObservableNames[i] == name) {
            return static_cast<Observable>(i);
        }
    }
    return std::nullopt;
}

SpecParseError::SpecParseError(const std::string &message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message), line_(line),
      column_(column) {}

std::vector<double> linspace(double start, double stop, int count) {
    std::vector<double> out;
    if (count < 1) {
        return out;
    }
    if (count == 1) {
        return {start};
    }
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // Endpoints are exact; interior points avoid accumulated drift.
        out.push_back(i == count - 1 ? stop : start + (stop - start) * i / (count - 1));
    }
    return out;
}

bool SweepSpec::wants(Observable o) const {
    return std::find(observables.begin(), observables.end(), o) != observables.end();
}

std::size_t SweepSpec::parameter_points() const {
    std::size_t n = 1;
    for (const Axis &a : axes) {
        n *= a.values.size();
    }
    return n;
}

std::size_t SweepSpec::row_count() const {
    std::size_t n = parameter_points();
    if (wants(Observable::wigner)) {
        n *= wigner_x.size() * wigner_y.size();
    }
    return n;
}

circuit::CircuitParams SweepSpec::params_at(std::size_t flat_index) const {
    std::array<double, 5> v{};
    for (Param p : kAllParams) {
        if (fixed[slot(p)]) {
            v[slot(p)] = *fixed[slot(p)];
        }
    }
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
        const std::size_t len = it->values.size();
        v[slot(it->param)] = it->values[flat_index % len];
        flat_index /= len;
    }
    circuit::CircuitParams params;
    params.r = v[slot(Param::r)];
    params.eta1 = v[slot(Param::eta1)];
    params.eta2 = v[slot(Param::eta2)];
    params.T = v[slot(Param::T)];
    params.m = static_cast<int>(v[slot(Param::m)]);
    return params;
}

SweepSpec parse_sweep_spec(std::string_view text) {
    SweepSpec spec;
    std::array<bool, 5> seen{};
    int observables_line = 0;
    int wigner_line = 0;
    int line_no = 0;

    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        const Token line = trim(Token{raw, 1});
        if (line.text.empty()) {
            if (nl == std::string_view::npos) {
                break;
            }
            continue;
        }
        const LineParser lp(line_no);
        const std::size_t eq = line.text.find('=');
        if (eq == std::string_view::npos) {
            lp.fail("expected 'key = value'", line.column);
        }
        const Token key = trim(Token{line.text.substr(0, eq), line.column});
        const Token value = trim(Token{line.text.substr(eq + 1), line.column + static_cast<int>(eq) + 1});
        if (key.text.empty()) {
            lp.fail("missing key before '='", line.column);
        }
        if (value.text.empty()) {
            lp.fail("missing value after '='", value.column);
        }

        const auto claim_param = [&](std::string_view name, int column) {
            const auto p = parse_param(name);
            if (!p) {
                lp.fail("unknown parameter '" + std::string(name) + "' (expected r, eta1, eta2, T or m)", column);
            }
            if (seen[slot(*p)]) {
                lp.fail("parameter '" + std::string(name) + "' given more than once", key.column);
            }
            seen[slot(*p)] = true;
            return *p;
        };

        if (key.text.starts_with("axis.")) {
            const Param p = claim_param(key.text.substr(5), key.column + 5);
            Axis axis{p, {}};
            for (const auto &[v, column] : lp.values(value)) {
                lp.check_domain(p, v, column);
                axis.values.push_back(v);
            }
            spec.axes.push_back(std::move(axis));
        } else if (key.text.starts_with("fixed.")) {
            const Param p = claim_param(key.text.substr(6), key.column + 6);
            const double v = lp.number(value);
            lp.check_domain(p, v, value.column);
            spec.fixed[slot(p)] = v;
        } else if (key.text == "observables") {
            if (observables_line != 0) {
                lp.fail("observables given more than once", key.column);
            }
            observables_line = line_no;
            for (const Token &item : split(value, ',')) {
                const auto o = parse_observable(item.text);
                if (!o) {
                    lp.fail("unknown observable '" + std::string(item.text) +
                                "' (expected prob, variances, threshold, pnd or wigner)",
                            item.column);
                }
                if (spec.wants(*o)) {
                    lp.fail("observable '" + std::string(item.text) + "' listed twice", item.column);
                }
                spec.observables.push_back(*o);
            }
        } else if (key.text == "pnd.max") {
            spec.pnd_max = lp.integer(value);
            if (spec.pnd_max < 0) {
                lp.fail("pnd.max must be non-negative", value.column);
            }
        } else if (key.text == "wigner.x" || key.text == "wigner.y") {
            auto &target = key.text == "wigner.x" ? spec.wigner_x : spec.wigner_y;
            if (!target.empty()) {
                lp.fail(std::string(key.text) + " given more than once", key.column);
            }
            for (const auto &[v, column] : lp.values(value)) {
                target.push_back(v);
            }
            wigner_line = line_no;
        } else {
            lp.fail("unknown key '" + std::string(key.text) + "'", key.column);
        }
        if (nl == std::string_view::npos) {
            break;
        }
    }

    const LineParser at_end(line_no + 1);
    for (Param p : kAllParams) {
        if (!seen[slot(p)]) {
            at_end.fail("parameter '" + std::string(param_name(p)) + "' needs an axis or a fixed value", 1);
        }
    }
    if (spec.observables.empty()) {
        at_end.fail("no observables requested", 1);
    }
    if (spec.wants(Observable::wigner) && (spec.wigner_x.empty() || spec.wigner_y.empty())) {
        LineParser(observables_line).fail("wigner needs both wigner.x and wigner.y", 1);
    }
    if (!spec.wants(Observable::wigner) && wigner_line != 0) {
        LineParser(wigner_line).fail("wigner coordinates given but wigner is not an observable", 1);
    }
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SpecParseError("cannot open " + path.string(), 0, 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep_spec(buf.str());
}

} // namespace mssvs::cli
