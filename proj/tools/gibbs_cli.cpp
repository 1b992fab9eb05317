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

// gibbs-cli: run adaptive Gibbs-state preparation sweeps, gradient checks
// and plot-data extraction.
//
// Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/harness/config.hpp"
#include "gibbs/harness/gradcheck.hpp"
#include "gibbs/harness/plotdata.hpp"
#include "gibbs/harness/sweep.hpp"

namespace {

namespace h = gibbs::harness;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct SweepCommand {
    CLI::App *app = nullptr;
    std::optional<h::Algorithm> forced;
    std::string config_path;
    std::map<std::string, std::string> overrides;
};

void add_sweep_options(SweepCommand &cmd) {
    cmd.app->add_option("--config", cmd.config_path, "key = value config file");
    for (const auto &key : h::config_keys()) {
        cmd.app->add_option("--" + key, cmd.overrides[key], "override config key '" + key + "'");
    }
}

int run_sweep_command(const SweepCommand &cmd) {
    h::ExperimentConfig cfg;
    if (cmd.forced) cfg.algorithm = *cmd.forced;
    if (!cmd.config_path.empty()) cfg = h::load_config(cmd.config_path, cfg);
    for (const auto &[key, value] : cmd.overrides) {
        if (!value.empty()) h::set_config_value(cfg, key, value);
    }
    if (cmd.forced && cfg.algorithm != *cmd.forced) {
        throw gibbs::ConfigError(std::string("algorithm conflicts with subcommand ") + cmd.app->get_name());
    }
    const auto res = h::run_sweep(cfg);
    std::printf("# %s\n", h::csv_header().c_str());
    for (const auto &r : res.results) std::printf("%s\n", h::csv_row(r).c_str());
    std::printf("# wrote %s, %s and %zu trace files\n", res.results_csv.c_str(), res.history_csv.c_str(),
                res.trace_files.size());
    return 0;
}

/// Applies `--config` for the small subcommands: only the listed keys are accepted.
void apply_small_config(const std::string &path, const std::map<std::string, std::string *> &slots) {
    if (path.empty()) return;
    for (const auto &[key, value] : h::parse_key_values(h::read_text_file(path))) {
        const auto it = slots.find(key);
        if (it == slots.end()) throw gibbs::ConfigError("unknown config key '" + key + "'");
        if (it->second->empty()) *it->second = value; // command-line flags win
    }
}

std::uint64_t parse_count(const std::string &key, const std::string &v) {
    return h::detail::parse_u64(key, v);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Adaptive variational Gibbs-state preparation"};
    app.require_subcommand(1);

    SweepCommand vqe{app.add_subcommand("vqe-gibbs", "adaptive vqe-flavor sweep"), h::Algorithm::vqe};
    SweepCommand qaoa{app.add_subcommand("qaoa-gibbs", "adaptive qaoa-flavor sweep"), h::Algorithm::qaoa};
    SweepCommand base{app.add_subcommand("baseline", "fixed-entangler layered sweep"), h::Algorithm::baseline};
    SweepCommand sweep{app.add_subcommand("sweep", "sweep with the algorithm named in the config"), std::nullopt};
    for (auto *c : {&vqe, &qaoa, &base, &sweep}) add_sweep_options(*c);

    auto *gc = app.add_subcommand("gradcheck", "shift rule vs finite differences on random ansaetze");
    std::string gc_config, gc_seed, gc_trials, gc_out;
    bool gc_zero = false;
    gc->add_option("--config", gc_config, "key = value file with seed, trials, out");
    gc->add_option("--seed", gc_seed, "RNG seed (default 0)");
    gc->add_option("--trials", gc_trials, "number of random ansaetze (default 100)");
    gc->add_option("--out", gc_out, "directory for gradcheck.txt");
    gc->add_flag("--zero-params", gc_zero, "evaluate every ansatz at all-zero parameters");

    auto *pd = app.add_subcommand("plotdata", "extract plot series from a results file");
    std::string pd_config, pd_csv, pd_panel, pd_out;
    pd->add_option("--config", pd_config, "key = value file with csv, panel, out");
    pd->add_option("--csv", pd_csv, "results.csv (fig1, fig3) or history.csv (fig2)");
    pd->add_option("--panel", pd_panel, "fig1, fig2 or fig3");
    pd->add_option("--out", pd_out, "output directory (default: plots next to the csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        for (auto *c : {&vqe, &qaoa, &base, &sweep}) {
            if (c->app->parsed()) return run_sweep_command(*c);
        }
        if (gc->parsed()) {
            apply_small_config(gc_config, {{"seed", &gc_seed}, {"trials", &gc_trials}, {"out", &gc_out}});
            const auto seed = gc_seed.empty() ? 0 : parse_count("seed", gc_seed);
            const auto trials = gc_trials.empty() ? 100 : parse_count("trials", gc_trials);
            const auto rep = h::gradcheck(seed, trials, gc_zero);
            const std::string text = h::format_report(rep);
            if (!gc_out.empty()) {
                std::filesystem::create_directories(gc_out);
                std::ofstream f(std::filesystem::path(gc_out) / "gradcheck.txt");
                f << text;
                if (!f.flush()) throw gibbs::ConfigError("cannot write gradcheck.txt under " + gc_out);
            }
            std::fputs(text.c_str(), stdout);
            return rep.pass() ? 0 : kExitNumerical;
        }
        if (pd->parsed()) {
            apply_small_config(pd_config, {{"csv", &pd_csv}, {"panel", &pd_panel}, {"out", &pd_out}});
            if (pd_csv.empty()) throw gibbs::ConfigError("plotdata: --csv is required");
            if (pd_panel.empty()) throw gibbs::ConfigError("plotdata: --panel is required");
            const std::filesystem::path out =
                pd_out.empty() ? std::filesystem::path(pd_csv).parent_path() / "plots" : std::filesystem::path(pd_out);
            for (const auto &p : h::emit_plot_data(pd_csv, h::parse_panel(pd_panel), out)) {
                std::printf("%s\n", p.c_str());
            }
            return 0;
        }
    } catch (const gibbs::ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const gibbs::NumericalError &e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error &e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
