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
 * Experiment configuration: flat `key = value` text, comma-separated lists,
 * `#` comments. Every key can also be set by a command-line override.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "../adapt.hpp"
#include "../errors.hpp"
#include "../models.hpp"

namespace gibbs::harness {

enum class Model { ising, xy };
enum class Algorithm { vqe, qaoa, baseline };

inline const char *to_string(Model m) { return m == Model::ising ? "ising" : "xy"; }

inline const char *to_string(Algorithm a) {
    switch (a) {
    case Algorithm::vqe: return "vqe";
    case Algorithm::qaoa: return "qaoa";
    case Algorithm::baseline: return "baseline";
    }
    return "?";
}

inline HermitianOperator model_hamiltonian(Model m, std::size_t n_data) {
    return m == Model::ising ? ising_hamiltonian(n_data) : xy_hamiltonian(n_data);
}

/// Temperature grid 0.2, 0.4, ..., 3.0.
inline std::vector<double> default_beta_inv_grid() {
    std::vector<double> out;
    for (int k = 1; k <= 15; ++k) out.push_back(0.2 * k);
    return out;
}

/// Temperature grid used for layered sweeps.
inline std::vector<double> layered_beta_inv_grid() { return {0.2, 0.6, 1.0, 1.2, 1.6, 2.0, 2.2, 2.6, 3.0}; }

inline constexpr std::size_t kMaxQubits = 14;

struct ExperimentConfig {
    std::vector<Model> models{Model::ising};
    std::size_t n_data = 4;
    std::vector<std::size_t> n_ancilla;            // empty: {n_data}
    std::vector<double> beta_inv;                   // empty: the algorithm's default grid
    Algorithm algorithm = Algorithm::vqe;
    double epsilon = 1e-3;
    std::size_t layer_budget = 4;
    std::vector<std::optional<unsigned>> truncation{std::nullopt}; // nullopt = exact
    std::size_t restarts = 5;
    std::uint64_t master_seed = 0;
    std::size_t max_iters = kVqeIterationCap;
    std::size_t threads = 1;
    std::string out = "out";

    /// Fills defaulted lists and checks every invariant. Throws ConfigError.
    void validate();

    [[nodiscard]] AdaptConfig adapt_config() const {
        AdaptConfig c;
        c.epsilon = epsilon;
        c.max_iterations = max_iters;
        c.layer_budget = layer_budget;
        return c;
    }

    /// Canonical text form: one `key = value` line per key in fixed order.
    [[nodiscard]] std::string canonical() const;
    [[nodiscard]] std::uint64_t hash() const;
};

inline const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys{"model",     "n_data",      "n_ancilla", "beta_inv",
                                               "algorithm", "epsilon",     "layer_budget", "truncation",
                                               "restarts",  "master_seed", "max_iters", "threads", "out"};
    return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string &key, std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (item.empty()) throw ConfigError("config key '" + key + "': empty list item");
        out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::uint64_t parse_u64(const std::string &key, const std::string &v) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
    return x;
}

inline double parse_double(const std::string &key, const std::string &v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != v.size() || v.empty() || !std::isfinite(x)) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
    return x;
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// FNV-1a, 64 bit
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/// Sets one key from its text value. Unknown keys and malformed values throw ConfigError.
inline void set_config_value(ExperimentConfig &cfg, const std::string &key, const std::string &raw) {
    const std::string value = detail::trim(raw);
    if (value.empty()) throw ConfigError("config key '" + key + "': empty value");
    if (key == "model") {
        cfg.models.clear();
        for (const auto &m : detail::split_list(key, value)) {
            if (m == "ising") cfg.models.push_back(Model::ising);
            else if (m == "xy") cfg.models.push_back(Model::xy);
            else throw ConfigError("config key 'model': expected ising or xy, got '" + m + "'");
        }
    } else if (key == "n_data") {
        cfg.n_data = detail::parse_u64(key, value);
    } else if (key == "n_ancilla") {
        cfg.n_ancilla.clear();
        for (const auto &v : detail::split_list(key, value)) cfg.n_ancilla.push_back(detail::parse_u64(key, v));
    } else if (key == "beta_inv") {
        cfg.beta_inv.clear();
        for (const auto &v : detail::split_list(key, value)) cfg.beta_inv.push_back(detail::parse_double(key, v));
    } else if (key == "algorithm") {
        if (value == "vqe") cfg.algorithm = Algorithm::vqe;
        else if (value == "qaoa") cfg.algorithm = Algorithm::qaoa;
        else if (value == "baseline") cfg.algorithm = Algorithm::baseline;
        else throw ConfigError("config key 'algorithm': expected vqe, qaoa or baseline, got '" + value + "'");
    } else if (key == "epsilon") {
        cfg.epsilon = detail::parse_double(key, value);
    } else if (key == "layer_budget") {
        cfg.layer_budget = detail::parse_u64(key, value);
    } else if (key == "truncation") {
        cfg.truncation.clear();
        for (const auto &v : detail::split_list(key, value)) {
            if (v == "exact") cfg.truncation.emplace_back(std::nullopt);
            else cfg.truncation.emplace_back(static_cast<unsigned>(detail::parse_u64(key, v)));
        }
    } else if (key == "restarts") {
        cfg.restarts = detail::parse_u64(key, value);
    } else if (key == "master_seed") {
        cfg.master_seed = detail::parse_u64(key, value);
    } else if (key == "max_iters") {
        cfg.max_iters = detail::parse_u64(key, value);
    } else if (key == "threads") {
        cfg.threads = detail::parse_u64(key, value);
    } else if (key == "out") {
        cfg.out = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

/// Splits config text into (key, value) pairs in file order.
inline std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        out.emplace_back(detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
    }
    return out;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Parses config text on top of `base`. Later lines win over earlier ones.
inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
    for (const auto &[k, v] : parse_key_values(text)) set_config_value(base, k, v);
    return base;
}

inline ExperimentConfig load_config(const std::string &path, ExperimentConfig base = {}) {
    return parse_config(read_text_file(path), std::move(base));
}

inline void ExperimentConfig::validate() {
    if (models.empty()) throw ConfigError("model: at least one model required");
    if (n_data < 2) throw ConfigError("n_data must be >= 2");
    const bool layered = algorithm != Algorithm::vqe;
    if (n_ancilla.empty()) n_ancilla = {n_data};
    if (beta_inv.empty()) beta_inv = layered ? layered_beta_inv_grid() : default_beta_inv_grid();
    if (truncation.empty()) throw ConfigError("truncation: at least one entry required");
    for (double b : beta_inv) {
        if (!(b > 0.0)) throw ConfigError("beta_inv entries must be > 0");
    }
    for (std::size_t na : n_ancilla) {
        if (na < 1 || na > n_data) throw ConfigError("n_ancilla entries must lie in [1, n_data]");
        if (layered && na != n_data) throw ConfigError("qaoa and baseline require n_ancilla = n_data");
        if (n_data + na > kMaxQubits) throw ConfigError("n_data + n_ancilla exceeds 14 qubits");
    }
    for (const auto &m : truncation) {
        if (m && *m < 1) throw ConfigError("truncation order must be >= 1");
    }
    if (restarts < 1) throw ConfigError("restarts must be >= 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (max_iters > kVqeIterationCap) throw ConfigError("max_iters must be <= 200");
    if (layered && (layer_budget < 1 || layer_budget > kLayerCap)) {
        throw ConfigError("layer_budget must lie in [1, 6]");
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (out.empty()) throw ConfigError("out must be a directory path");
}

inline std::string ExperimentConfig::canonical() const {
    auto join = [](const auto &xs, auto fmt) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
        return s;
    };
    std::string s;
    s += "model = " + join(models, [](Model m) { return std::string(to_string(m)); }) + "\n";
    s += "n_data = " + std::to_string(n_data) + "\n";
    s += "n_ancilla = " + join(n_ancilla, [](std::size_t v) { return std::to_string(v); }) + "\n";
    s += "beta_inv = " + join(beta_inv, detail::format_double) + "\n";
    s += std::string("algorithm = ") + to_string(algorithm) + "\n";
    s += "epsilon = " + detail::format_double(epsilon) + "\n";
    s += "layer_budget = " + std::to_string(layer_budget) + "\n";
    s += "truncation = " +
         join(truncation, [](const std::optional<unsigned> &m) { return m ? std::to_string(*m) : std::string("exact"); }) +
         "\n";
    s += "restarts = " + std::to_string(restarts) + "\n";
    s += "master_seed = " + std::to_string(master_seed) + "\n";
    s += "max_iters = " + std::to_string(max_iters) + "\n";
    return s;
}

// threads and out do not change results, so they stay out of the hash
inline std::uint64_t ExperimentConfig::hash() const { return detail::fnv1a(canonical()); }

} // namespace gibbs::harness
