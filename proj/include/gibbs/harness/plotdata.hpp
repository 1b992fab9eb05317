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
 * Plot series from results files. Each series is a whitespace-delimited
 * text file with a `#` column line, sorted by its first column.
 *
 * fig1 (results.csv, vqe, exact target), per model and n_data:
 *   *_na<k>_fidelity.dat   beta_inv fidelity
 *   *_na<k>_bound.dat      beta_inv fidelity_bound
 *   *_cnot.dat             beta_inv cnot_count      (largest n_ancilla)
 * fig2 (history.csv, qaoa and baseline rows):
 *   fig2a_<alg>_..._binv<b>.dat  layer fidelity cnot_count
 *   fig2b_<alg>_..._cnot.dat     beta_inv cnot_count fidelity   (last layer)
 * fig3 (results.csv, vqe), per model, n_data, n_ancilla:
 *   *_m<m>.dat, *_m_inf.dat  beta_inv infidelity   (exact target -> m_inf)
 *   *_bound.dat              beta_inv 1 - fidelity_bound
 * Infidelities are written as max(1 - F, 1e-16).
 */
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "../errors.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace gibbs::harness {

enum class Panel { fig1, fig2, fig3 };

inline Panel parse_panel(const std::string &s) {
    if (s == "fig1") return Panel::fig1;
    if (s == "fig2") return Panel::fig2;
    if (s == "fig3") return Panel::fig3;
    throw ConfigError("unknown panel '" + s + "' (expected fig1, fig2 or fig3)");
}

inline double log_infidelity(double fidelity) { return std::max(1.0 - fidelity, 1e-16); }

namespace detail {

inline std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// Rows keyed by their x value; a later CSV row with the same key replaces an earlier one.
struct Series {
    std::string columns;
    std::map<double, std::vector<double>> points;
};

inline std::string render(const Series &s) {
    std::string out = "# " + s.columns + "\n";
    for (const auto &[x, ys] : s.points) {
        out += format_double(x);
        for (double y : ys) out += ' ' + format_double(y);
        out += '\n';
    }
    return out;
}

class RowView {
public:
    RowView(const CsvTable &t, const std::vector<std::string> &required) : t_(t) {
        for (const auto &c : required) {
            if (!t.column(c)) throw ConfigError("plot data: missing column '" + c + "'");
        }
    }
    [[nodiscard]] const std::string &str(std::size_t row, const std::string &c) const {
        return t_.rows[row][*t_.column(c)];
    }
    [[nodiscard]] double num(std::size_t row, const std::string &c) const {
        const auto &v = str(row, c);
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used == v.size()) return x;
        } catch (const std::exception &) {
        }
        throw ConfigError("plot data: column '" + c + "' has non-numeric value '" + v + "'");
    }

private:
    const CsvTable &t_;
};

} // namespace detail

/// Builds every series file for `panel` as (file name, contents) pairs without touching disk.
inline std::map<std::string, std::string> plot_series(const CsvTable &table, Panel panel) {
    if (table.columns.empty() || table.rows.empty()) throw ConfigError("plot data: results file has no rows");
    std::vector<std::string> required{"algorithm", "model", "n_data", "n_ancilla", "beta_inv", "truncation", "fidelity"};
    if (panel == Panel::fig1) {
        required.insert(required.end(), {"fidelity_bound", "cnot_count"});
    } else if (panel == Panel::fig2) {
        required.insert(required.end(), {"iteration", "cnot_count"});
    } else {
        required.push_back("fidelity_bound");
    }
    const detail::RowView v(table, required);
    std::map<std::string, detail::Series> series;
    auto add = [&](const std::string &name, const std::string &cols, double x, std::vector<double> ys) {
        auto &s = series[name];
        s.columns = cols;
        s.points[x] = std::move(ys);
    };

    // largest ancilla count per (model, n_data), for the fig1 CNOT series
    std::map<std::string, double> widest;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string key = v.str(r, "model") + "_nd" + v.str(r, "n_data");
        widest[key] = std::max(widest[key], v.num(r, "n_ancilla"));
    }

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string algo = v.str(r, "algorithm");
        const std::string trunc = v.str(r, "truncation");
        const std::string stem = v.str(r, "model") + "_nd" + v.str(r, "n_data");
        const double beta_inv = v.num(r, "beta_inv");
        const double fid = v.num(r, "fidelity");
        switch (panel) {
        case Panel::fig1: {
            if (algo != "vqe" || trunc != "exact") break;
            const std::string na = v.str(r, "n_ancilla");
            add("fig1_" + stem + "_na" + na + "_fidelity.dat", "beta_inv fidelity", beta_inv, {fid});
            add("fig1_" + stem + "_na" + na + "_bound.dat", "beta_inv fidelity_bound", beta_inv,
                {v.num(r, "fidelity_bound")});
            if (v.num(r, "n_ancilla") == widest[stem]) {
                add("fig1_" + stem + "_cnot.dat", "beta_inv cnot_count", beta_inv, {v.num(r, "cnot_count")});
            }
            break;
        }
        case Panel::fig2: {
            if (algo != "qaoa" && algo != "baseline") break;
            const std::string head = algo + "_" + stem;
            add("fig2a_" + head + "_binv" + detail::short_number(beta_inv) + ".dat", "layer fidelity cnot_count",
                v.num(r, "iteration"), {fid, v.num(r, "cnot_count")});
            // rows arrive in iteration order, so the last one per temperature is the final layer
            add("fig2b_" + head + "_cnot.dat", "beta_inv cnot_count fidelity", beta_inv,
                {v.num(r, "cnot_count"), fid});
            break;
        }
        case Panel::fig3: {
            if (algo != "vqe") break;
            const std::string head = "fig3_" + stem + "_na" + v.str(r, "n_ancilla");
            const std::string m = trunc == "exact" ? std::string("_inf") : trunc;
            add(head + "_m" + m + ".dat", "beta_inv infidelity", beta_inv,
                {log_infidelity(fid)});
            add(head + "_bound.dat", "beta_inv infidelity_bound", beta_inv,
                {log_infidelity(v.num(r, "fidelity_bound"))});
            break;
        }
        }
    }
    if (series.empty()) throw ConfigError("plot data: no rows apply to this panel");
    std::map<std::string, std::string> out;
    for (const auto &[name, s] : series) out[name] = detail::render(s);
    return out;
}

/// Reads `csv_path`, builds the panel's series and writes them under `out_dir`.
inline std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path &csv_path, Panel panel,
                                                         const std::filesystem::path &out_dir) {
    const auto files = plot_series(read_csv(csv_path), panel);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (const auto &[name, text] : files) {
        const auto path = out_dir / name;
        std::ofstream f(path, std::ios::trunc);
        f << text;
        if (!f.flush()) throw ConfigError("write failed on " + path.string());
        written.push_back(path);
    }
    return written;
}

} // namespace gibbs::harness
