// Copyright 2026 The gibbs-adapt Authors.
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

/**
 * @file
 * Result rows and their CSV form. The first line of every results file is
 * a schema comment, the second the column header. Rows are appended whole
 * and flushed one at a time.
 */
#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "config.hpp"

namespace gibbs::harness {

inline constexpr const char *kSchemaLine = "# schema: gibbs-results v1";

inline const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{
        "run_id",    "config_hash", "algorithm",      "model",      "n_data",         "n_ancilla", "beta_inv",
        "truncation", "seed",       "restart",        "gamma0",     "iteration",      "objective", "fidelity",
        "pool_grad_norm", "cnot_count", "fidelity_bound", "termination", "wall_ms"};
    return cols;
}

/// Columns excluded from determinism comparisons.
inline bool is_timing_column(const std::string &name) { return name == "wall_ms"; }

struct ResultRecord {
    std::string run_id;
    std::uint64_t config_hash = 0;
    Algorithm algorithm = Algorithm::vqe;
    Model model = Model::ising;
    std::size_t n_data = 0;
    std::size_t n_ancilla = 0;
    double beta_inv = 0.0;
    std::optional<unsigned> truncation;
    std::uint64_t seed = 0;
    std::size_t restart = 0;
    double gamma0 = 0.0;
    std::size_t iteration = 0;
    double objective = 0.0;
    double fidelity = 0.0;
    double pool_grad_norm = 0.0;
    std::size_t cnot_count = 0;
    double fidelity_bound = 0.0;
    std::string termination;
    double wall_ms = 0.0;

    /// Throws NumericalError when fidelity leaves [0, 1] or exceeds the bound by more than 1e-6.
    void check() const {
        if (!(fidelity >= 0.0 && fidelity <= 1.0 + 1e-12)) {
            throw NumericalError("result record " + run_id + ": fidelity outside [0, 1]");
        }
        if (fidelity > fidelity_bound + 1e-6) {
            throw NumericalError("result record " + run_id + ": fidelity exceeds the rank bound");
        }
    }
};

inline std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, x);
    return buf;
}

inline std::string csv_header() {
    std::string s;
    for (std::size_t i = 0; i < csv_columns().size(); ++i) s += (i ? "," : "") + csv_columns()[i];
    return s;
}

inline std::string csv_row(const ResultRecord &r) {
    const auto f = detail::format_double;
    std::string s;
    s.reserve(256);
    s += r.run_id + ',' + hex64(r.config_hash) + ',' + to_string(r.algorithm) + ',' + to_string(r.model) + ',';
    s += std::to_string(r.n_data) + ',' + std::to_string(r.n_ancilla) + ',' + f(r.beta_inv) + ',';
    s += (r.truncation ? std::to_string(*r.truncation) : std::string("exact")) + ',';
    s += std::to_string(r.seed) + ',' + std::to_string(r.restart) + ',' + f(r.gamma0) + ',';
    s += std::to_string(r.iteration) + ',' + f(r.objective) + ',' + f(r.fidelity) + ',' + f(r.pool_grad_norm) + ',';
    s += std::to_string(r.cnot_count) + ',' + f(r.fidelity_bound) + ',' + r.termination + ',' + f(r.wall_ms);
    return s;
}

/**
 * Appends rows to a results file. A new or empty file gets the schema and
 * header lines; an existing file must carry the same two lines.
 */
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path &path) : path_(path) {
        std::error_code ec;
        const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
        if (!fresh) {
            std::ifstream in(path);
            std::string schema, header;
            std::getline(in, schema);
            std::getline(in, header);
            if (schema != kSchemaLine || header != csv_header()) {
                throw ConfigError("existing file " + path.string() + " has a different results schema");
            }
        }
        out_.open(path, std::ios::app | std::ios::binary);
        if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
        if (fresh) {
            out_ << kSchemaLine << '\n' << csv_header() << '\n';
            out_.flush();
        }
    }

    void write(const ResultRecord &r) {
        const std::string line = csv_row(r) + '\n';
        out_.write(line.data(), static_cast<std::streamsize>(line.size()));
        out_.flush();
        if (!out_) throw ConfigError("write failed on " + path_.string());
    }

    [[nodiscard]] const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// A parsed results file: header names plus raw field text per row.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::optional<std::size_t> column(const std::string &name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        return std::nullopt;
    }
};

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// Reads a results file. `#` lines are skipped; the first other line is the header.
inline CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split_csv_line(line);
        if (!have_header) {
            t.columns = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.columns.size()) {
            throw ConfigError(path.string() + ": row with " + std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(t.columns.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

} // namespace gibbs::harness
