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
 * Sweeps over model x truncation x ancilla count x temperature cells.
 *
 * Output directory layout:
 *   results.csv    one postselected row per cell
 *   history.csv    iteration 0..n rows of each cell's postselected run
 *   traces/        one JSON document per restart
 *   metadata.json  canonical config, hash and conventions
 */
#pragma once

#include <atomic>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "../adapt.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "seeds.hpp"
#include "trace_io.hpp"

namespace gibbs::harness {

struct Cell {
    std::size_t index = 0;
    Model model = Model::ising;
    std::optional<unsigned> truncation;
    std::size_t n_ancilla = 0;
    std::size_t beta_index = 0;
    double beta_inv = 0.0;
};

/// Cells in output order: model, then truncation, then n_ancilla, then temperature.
inline std::vector<Cell> enumerate_cells(const ExperimentConfig &cfg) {
    std::vector<Cell> out;
    for (Model m : cfg.models) {
        for (const auto &t : cfg.truncation) {
            for (std::size_t na : cfg.n_ancilla) {
                for (std::size_t b = 0; b < cfg.beta_inv.size(); ++b) {
                    out.push_back({out.size(), m, t, na, b, cfg.beta_inv[b]});
                }
            }
        }
    }
    return out;
}

inline std::string run_id(std::uint64_t config_hash, std::size_t cell_index) {
    return hex64(config_hash) + "-" + std::to_string(cell_index);
}

struct TraceFile {
    std::filesystem::path path;
    nlohmann::json doc;
};

struct CellOutput {
    ResultRecord result;
    std::vector<ResultRecord> history;
    std::vector<TraceFile> traces;
};

struct SweepResult {
    std::vector<ResultRecord> results;
    std::vector<ResultRecord> history;
    std::vector<std::filesystem::path> trace_files;
    std::filesystem::path results_csv;
    std::filesystem::path history_csv;
};

/// Runs every restart of one cell and postselects. Pure apart from timing.
inline CellOutput run_cell(const ExperimentConfig &cfg, const Cell &cell, const std::filesystem::path &trace_dir) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    const GibbsProblem problem =
        make_problem(model_hamiltonian(cell.model, cfg.n_data), cell.n_ancilla, 1.0 / cell.beta_inv, cell.truncation);
    const double bound = max_fidelity_bound(*problem.exact, cell.n_ancilla);
    const AdaptConfig ac = cfg.adapt_config();
    const std::uint64_t hash = cfg.hash();
    const std::string id = run_id(hash, cell.index);

    auto seed_of = [&](std::size_t r) {
        return cell_seed(cfg.master_seed, cell.model, cell.beta_index, cell.n_ancilla, r);
    };
    auto one = [&](std::size_t r) {
        const std::uint64_t seed = seed_of(r);
        switch (cfg.algorithm) {
        case Algorithm::vqe: return adapt_vqe_run(ac, problem, seed);
        case Algorithm::qaoa: return adapt_qaoa_run(ac, problem, draw_gamma0(seed), seed);
        case Algorithm::baseline: return baseline_qaoa_run(ac, problem, cfg.layer_budget, draw_gamma0(seed), seed);
        }
        throw ConfigError("unknown algorithm");
    };
    const Postselected ps = restart_postselect(one, cfg.restarts);
    const double cell_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

    ResultRecord base;
    base.run_id = id;
    base.config_hash = hash;
    base.algorithm = cfg.algorithm;
    base.model = cell.model;
    base.n_data = cfg.n_data;
    base.n_ancilla = cell.n_ancilla;
    base.beta_inv = cell.beta_inv;
    base.truncation = cell.truncation;
    base.seed = ps.best.trace.seed;
    base.restart = ps.best_index;
    base.gamma0 = ps.best.trace.gamma0;
    base.fidelity_bound = bound;
    base.termination = to_string(ps.best.trace.termination);

    CellOutput out;
    const auto &tr = ps.best.trace;
    out.result = base;
    out.result.iteration = tr.iterations.size();
    out.result.objective = tr.final_objective();
    out.result.fidelity = tr.final_fidelity();
    out.result.pool_grad_norm = tr.final_pool_gradient_norm;
    out.result.cnot_count = tr.final_cnot_count();
    out.result.wall_ms = cell_ms;
    out.result.check();

    // row k describes the state after k iterations; its pool-gradient norm is the one measured there
    double elapsed = 0.0;
    for (std::size_t k = 0; k <= tr.iterations.size(); ++k) {
        ResultRecord row = base;
        row.iteration = k;
        if (k == 0) {
            row.objective = tr.initial_objective;
            row.fidelity = tr.initial_fidelity;
            row.cnot_count = tr.initial_cnot_count;
        } else {
            const auto &rec = tr.iterations[k - 1];
            row.objective = rec.objective;
            row.fidelity = rec.fidelity;
            row.cnot_count = rec.cnot_count;
            elapsed += rec.wall_ms;
        }
        row.pool_grad_norm = k < tr.iterations.size() ? tr.iterations[k].pool_gradient_norm : tr.final_pool_gradient_norm;
        row.wall_ms = elapsed;
        row.check();
        out.history.push_back(std::move(row));
    }

    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        TraceHeader h{id,     cfg.algorithm, cell.model, cfg.n_data, cell.n_ancilla, cell.beta_inv, cell.truncation,
                      r,      seed_of(r),    0.0,        r == ps.best_index};
        TraceFile tf;
        tf.path = trace_dir / (id + "-r" + std::to_string(r) + ".json");
        if (ps.restarts[r]) {
            h.gamma0 = ps.restarts[r]->trace.gamma0;
            tf.doc = trace_json(h, *ps.restarts[r]);
        } else {
            tf.doc = failed_trace_json(h, ps.failures[r]);
        }
        out.traces.push_back(std::move(tf));
    }
    return out;
}

inline nlohmann::json sweep_metadata(const ExperimentConfig &cfg) {
    return {{"config", cfg.canonical()},
            {"config_hash", hex64(cfg.hash())},
            {"csv_schema", kSchemaLine},
            {"trace_schema", kTraceSchema},
            {"layer_order", "layer 1 acts first on the reference state"},
            {"cnot_convention", kCnotConvention},
            {"seed_scheme", "splitmix64 chain over (master_seed, model, beta index, n_ancilla, restart)"}};
}

/**
 * Validates `cfg`, prepares the output directory, then runs every cell on
 * cfg.threads workers. Results are written in cell order by the calling
 * thread, so the files do not depend on scheduling.
 */
inline SweepResult run_sweep(ExperimentConfig cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path out_dir(cfg.out);
    const fs::path trace_dir = out_dir / "traces";
    std::error_code ec;
    fs::create_directories(trace_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + trace_dir.string() + ": " + ec.message());

    SweepResult res;
    res.results_csv = out_dir / "results.csv";
    res.history_csv = out_dir / "history.csv";
    CsvWriter results(res.results_csv);
    CsvWriter history(res.history_csv);
    write_json_atomic(out_dir / "metadata.json", sweep_metadata(cfg));

    const auto cells = enumerate_cells(cfg);
    std::vector<std::optional<CellOutput>> slots(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::vector<bool> done(cells.size(), false);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};

    auto worker = [&] {
        while (!abort) {
            const std::size_t i = next++;
            if (i >= cells.size()) return;
            std::optional<CellOutput> o;
            std::exception_ptr err;
            try {
                o = run_cell(cfg, cells[i], trace_dir);
            } catch (...) {
                err = std::current_exception();
            }
            {
                std::lock_guard lock(mu);
                slots[i] = std::move(o);
                errors[i] = err;
                done[i] = true;
            }
            cv.notify_all();
        }
    };

    const std::size_t n_workers = std::min(cfg.threads, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);

    std::exception_ptr failure;
    for (std::size_t i = 0; i < cells.size() && !failure; ++i) {
        std::optional<CellOutput> o;
        {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return done[i]; });
            if (errors[i]) {
                failure = errors[i];
                abort = true;
                break;
            }
            o = std::move(slots[i]);
            slots[i].reset();
        }
        try {
            for (const auto &t : o->traces) {
                write_json_atomic(t.path, t.doc);
                res.trace_files.push_back(t.path);
            }
            for (const auto &h : o->history) history.write(h);
            results.write(o->result);
        } catch (...) {
            failure = std::current_exception();
            abort = true;
            break;
        }
        res.results.push_back(std::move(o->result));
        res.history.insert(res.history.end(), o->history.begin(), o->history.end());
    }
    pool.clear(); // joins
    if (failure) std::rethrow_exception(failure);
    return res;
}

} // namespace gibbs::harness
