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
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mssvs::cli {

/// Empty (std::monostate) cells encode "undefined", e.g. observables of a
/// state whose herald never fires.
using Cell = std::variant<std::monostate, double, long long, std::string>;

/// Shortest decimal string that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] std::string format_cell(const Cell &cell);

class ResultTable {
  public:
    explicit ResultTable(std::vector<std::string> columns);

    void add_metadata(std::string key, std::string value);
    void add_row(std::vector<Cell> row);

    [[nodiscard]] const std::vector<std::string> &columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>> &rows() const noexcept { return rows_; }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>> &metadata() const noexcept {
        return metadata_;
    }

    /// `# key: value` lines, then the header, then one line per row.
    void write_csv(std::ostream &out) const;
    /// Writes next to `path` and renames into place, so readers never see a
    /// partial file.
    void write_csv_atomic(const std::filesystem::path &path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

} // namespace mssvs::cli
