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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gibbs/harness/config.hpp"
#include "gibbs/harness/csv.hpp"
#include "gibbs/harness/gradcheck.hpp"
#include "gibbs/harness/plotdata.hpp"
#include "gibbs/harness/seeds.hpp"
#include "gibbs/harness/sweep.hpp"
#include "gibbs/harness/trace_io.hpp"

using namespace gibbs;
using namespace gibbs::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("gibbs_harness_test_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> read_lines(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string drop_timing(const std::string &row) {
    auto fields = split_csv_line(row);
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i < csv_columns().size() && is_timing_column(csv_columns()[i])) continue;
        out += fields[i] + ",";
    }
    return out;
}

ExperimentConfig tiny_vqe(const fs::path &out) {
    ExperimentConfig c;
    c.n_data = 2;
    c.n_ancilla = {1};
    c.beta_inv = {1.0};
    c.restarts = 1;
    c.out = out.string();
    return c;
}

ResultRecord synthetic(Algorithm alg, Model m, std::size_t na, double binv, std::optional<unsigned> trunc,
                       std::size_t iteration = 0) {
    ResultRecord r;
    r.run_id = "synthetic";
    r.algorithm = alg;
    r.model = m;
    r.n_data = 4;
    r.n_ancilla = na;
    r.beta_inv = binv;
    r.truncation = trunc;
    r.iteration = iteration;
    r.fidelity = 0.9 + 0.01 * static_cast<double>(na);
    r.fidelity_bound = 1.0;
    r.cnot_count = 16 + 2 * iteration;
    r.termination = "threshold";
    return r;
}

} // namespace

TEST(Config, ParsesKeyValueTextWithListsAndComments) {
    const auto c = parse_config(R"(# sweep
model = ising, xy
n_data = 3
n_ancilla = 1,2 ,3
beta_inv = 0.5, 2.0   # two temperatures
algorithm = vqe
epsilon = 1e-4
truncation = exact, 5, 1
restarts = 2
master_seed = 99
out = /tmp/somewhere
)");
    EXPECT_EQ(c.models, (std::vector<Model>{Model::ising, Model::xy}));
    EXPECT_EQ(c.n_data, 3u);
    EXPECT_EQ(c.n_ancilla, (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(c.beta_inv, (std::vector<double>{0.5, 2.0}));
    EXPECT_EQ(c.epsilon, 1e-4);
    ASSERT_EQ(c.truncation.size(), 3u);
    EXPECT_FALSE(c.truncation[0].has_value());
    EXPECT_EQ(*c.truncation[1], 5u);
    EXPECT_EQ(c.restarts, 2u);
    EXPECT_EQ(c.master_seed, 99u);
    EXPECT_EQ(c.out, "/tmp/somewhere");
}

TEST(Config, RejectsMalformedInput) {
    EXPECT_THROW(parse_config("bogus = 1"), ConfigError);
    EXPECT_THROW(parse_config("n_data 4"), ConfigError);
    EXPECT_THROW(parse_config("n_data = four"), ConfigError);
    EXPECT_THROW(parse_config("n_data = -1"), ConfigError);
    EXPECT_THROW(parse_config("beta_inv = 0.5,,1"), ConfigError);
    EXPECT_THROW(parse_config("beta_inv = nan"), ConfigError);
    EXPECT_THROW(parse_config("model = heisenberg"), ConfigError);
    EXPECT_THROW(parse_config("algorithm = annealing"), ConfigError);
    EXPECT_THROW(parse_config("epsilon ="), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST(Config, ValidationEnforcesInvariants) {
    auto bad = [](const std::string &text) {
        auto c = parse_config(text);
        EXPECT_THROW(c.validate(), ConfigError) << text;
    };
    bad("beta_inv = 1, -0.5");
    bad("beta_inv = 0");
    bad("restarts = 0");
    bad("algorithm = qaoa\nn_data = 3\nn_ancilla = 2");
    bad("n_data = 4\nn_ancilla = 5");
    bad("n_data = 1");
    bad("truncation = 0");
    bad("algorithm = qaoa\nlayer_budget = 7");
    bad("max_iters = 201");
    bad("n_data = 8");
}

TEST(Config, DefaultsFilledByValidation) {
    ExperimentConfig v;
    v.validate();
    EXPECT_EQ(v.n_ancilla, std::vector<std::size_t>{4});
    ASSERT_EQ(v.beta_inv.size(), 15u);
    EXPECT_NEAR(v.beta_inv.front(), 0.2, 1e-15);
    EXPECT_NEAR(v.beta_inv.back(), 3.0, 1e-15);
    ExperimentConfig q;
    q.algorithm = Algorithm::qaoa;
    q.validate();
    EXPECT_EQ(q.beta_inv, (std::vector<double>{0.2, 0.6, 1.0, 1.2, 1.6, 2.0, 2.2, 2.6, 3.0}));
}

TEST(Config, HashCoversResultsButNotPlacement) {
    ExperimentConfig a, b;
    a.validate();
    b.out = "elsewhere";
    b.threads = 4;
    b.validate();
    EXPECT_EQ(a.hash(), b.hash());
    b.master_seed = 1;
    EXPECT_NE(a.hash(), b.hash());
    EXPECT_EQ(parse_config(a.canonical()).canonical(), a.canonical());
}

TEST(Seeds, PinnedValues) {
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(cell_seed(0, Model::ising, 0, 4, 0), 548957301417047501ULL);
    EXPECT_EQ(cell_seed(2026, Model::xy, 3, 2, 4), 2506234095415628314ULL);
}

TEST(Seeds, EveryInputMatters) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m : {0, 1})
        for (Model model : {Model::ising, Model::xy})
            for (std::uint64_t b = 0; b < 4; ++b)
                for (std::uint64_t na = 1; na <= 4; ++na)
                    for (std::uint64_t r = 0; r < 5; ++r) seen.insert(cell_seed(m, model, b, na, r));
    EXPECT_EQ(seen.size(), 2u * 2 * 4 * 4 * 5);
}

TEST(Csv, RowFormatAndSchema) {
    auto r = synthetic(Algorithm::vqe, Model::xy, 2, 0.1, 5u);
    r.config_hash = 0xabcdef;
    r.objective = -1.0 / 3.0;
    const auto fields = split_csv_line(csv_row(r));
    ASSERT_EQ(fields.size(), csv_columns().size());
    EXPECT_EQ(fields[1], "0000000000abcdef");
    EXPECT_EQ(fields[3], "xy");
    EXPECT_EQ(fields[6], "0.10000000000000001");
    EXPECT_EQ(fields[7], "5");
    EXPECT_EQ(fields[12], "-0.33333333333333331");
    EXPECT_EQ(csv_header().substr(0, 7), "run_id,");
}

TEST(Csv, WriterCreatesSchemaThenAppendsWholeRows) {
    const auto dir = scratch("csv");
    fs::create_directories(dir);
    const auto path = dir / "results.csv";
    {
        CsvWriter w(path);
        w.write(synthetic(Algorithm::vqe, Model::ising, 1, 0.5, std::nullopt));
    }
    {
        CsvWriter w(path);
        w.write(synthetic(Algorithm::vqe, Model::ising, 2, 0.5, std::nullopt));
    }
    const auto lines = read_lines(path);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], kSchemaLine);
    EXPECT_EQ(lines[1], csv_header());
    const auto t = read_csv(path);
    EXPECT_EQ(t.rows.size(), 2u);

    std::ofstream(dir / "other.csv") << "# schema: something else\na,b\n";
    EXPECT_THROW(CsvWriter(dir / "other.csv"), ConfigError);
}

TEST(Csv, RecordInvariants) {
    auto r = synthetic(Algorithm::vqe, Model::ising, 1, 1.0, std::nullopt);
    r.fidelity_bound = 0.8;
    r.fidelity = 0.8 + 5e-7;
    EXPECT_NO_THROW(r.check());
    r.fidelity = 0.8 + 2e-6;
    EXPECT_THROW(r.check(), NumericalError);
    r.fidelity = -0.1;
    EXPECT_THROW(r.check(), NumericalError);
}

TEST(Sweep, SingleCellWritesOneRecordAndOneTrace) {
    const auto dir = scratch("single");
    const auto res = run_sweep(tiny_vqe(dir));
    ASSERT_EQ(res.results.size(), 1u);
    ASSERT_EQ(res.trace_files.size(), 1u);
    EXPECT_TRUE(fs::exists(res.trace_files[0]));
    EXPECT_TRUE(fs::exists(dir / "metadata.json"));
    const auto table = read_csv(res.results_csv);
    ASSERT_EQ(table.rows.size(), 1u);
    const auto hist = read_csv(res.history_csv);
    EXPECT_EQ(hist.rows.size(), res.results[0].iteration + 1);
    const auto &r = res.results[0];
    EXPECT_LE(r.fidelity, r.fidelity_bound + 1e-6);
    EXPECT_EQ(r.seed, cell_seed(0, Model::ising, 0, 1, 0));
}

TEST(Sweep, TraceReplaysTheAnsatzBitExactly) {
    const auto dir = scratch("replay");
    auto cfg = tiny_vqe(dir);
    cfg.n_ancilla = {2};
    cfg.restarts = 2;
    const auto res = run_sweep(cfg);
    ASSERT_EQ(res.trace_files.size(), 2u);
    for (const auto &path : res.trace_files) {
        const auto doc = read_json(path);
        const Ansatz a = replay_ansatz(doc);
        const auto problem = make_problem(ising_hamiltonian(2), 2, 1.0);
        Ansatz fresh = make_vqe_ansatz(problem, reference_angles(4, doc.at("seed").get<std::uint64_t>()));
        EXPECT_EQ(a.reference.angles, fresh.reference.angles);
        const double f = problem.fidelity_of(a.state());
        const auto &its = doc.at("iterations");
        const double recorded = its.empty() ? doc.at("initial").at("fidelity").get<double>()
                                            : its.back().at("fidelity").get<double>();
        EXPECT_EQ(f, recorded);
        if (doc.at("selected").get<bool>()) EXPECT_EQ(f, res.results[0].fidelity);
    }
}

TEST(Sweep, LayeredTraceReplays) {
    const auto dir = scratch("layered");
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::qaoa;
    cfg.n_data = 2;
    cfg.beta_inv = {0.8};
    cfg.restarts = 2;
    cfg.layer_budget = 2;
    cfg.out = dir.string();
    const auto res = run_sweep(cfg);
    ASSERT_EQ(res.results.size(), 1u);
    const auto problem = make_problem(ising_hamiltonian(2), 2, 1.0 / 0.8);
    for (const auto &path : res.trace_files) {
        const auto doc = read_json(path);
        const Ansatz a = replay_ansatz(doc);
        EXPECT_EQ(a.flavor, Flavor::qaoa);
        const auto &its = doc.at("iterations");
        if (!its.empty()) EXPECT_EQ(problem.fidelity_of(a.state()), its.back().at("fidelity").get<double>());
    }
}

TEST(Sweep, DeterministicAcrossRunsAndThreadCounts) {
    auto cfg = tiny_vqe(scratch("det_a"));
    cfg.models = {Model::ising, Model::xy};
    cfg.n_ancilla = {1, 2};
    cfg.beta_inv = {0.5, 2.0};
    cfg.restarts = 2;
    run_sweep(cfg);
    auto cfg_b = cfg;
    cfg_b.out = scratch("det_b").string();
    cfg_b.threads = 3;
    run_sweep(cfg_b);
    for (const char *file : {"results.csv", "history.csv"}) {
        const auto a = read_lines(fs::path(cfg.out) / file);
        const auto b = read_lines(fs::path(cfg_b.out) / file);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(drop_timing(a[i]), drop_timing(b[i]));
    }
}

TEST(Sweep, InvalidConfigIsRejectedBeforeAnyOutput) {
    const auto dir = scratch("invalid");
    auto cfg = tiny_vqe(dir);
    cfg.beta_inv = {-1.0};
    EXPECT_THROW(run_sweep(cfg), ConfigError);
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Sweep, UnwritableOutputIsAConfigError) {
    const auto dir = scratch("blocker");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    auto cfg = tiny_vqe(dir / "file" / "sub");
    EXPECT_THROW(run_sweep(cfg), ConfigError);
}

TEST(PlotData, Fig1Cardinality) {
    const auto dir = scratch("fig1");
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "results.csv");
        for (Model m : {Model::ising, Model::xy})
            for (std::size_t na = 1; na <= 4; ++na)
                for (double b : {0.5, 1.0, 2.0}) w.write(synthetic(Algorithm::vqe, m, na, b, std::nullopt));
    }
    const auto files = emit_plot_data(dir / "results.csv", Panel::fig1, dir / "plots");
    EXPECT_EQ(files.size(), 2u * (4 + 4 + 1));
    const auto lines = read_lines(dir / "plots" / "fig1_xy_nd4_na3_fidelity.dat");
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "# beta_inv fidelity");
    std::istringstream row(lines[1]);
    double x = 0, y = 0;
    row >> x >> y;
    EXPECT_EQ(x, 0.5);
    EXPECT_NEAR(y, 0.93, 1e-15);
    EXPECT_TRUE(fs::exists(dir / "plots" / "fig1_ising_nd4_cnot.dat"));
}

TEST(PlotData, Fig3MapsExactToInfinityAndClampsInfidelity) {
    const auto dir = scratch("fig3");
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "results.csv");
        for (std::optional<unsigned> m : {std::optional<unsigned>{}, std::optional<unsigned>{1}, std::optional<unsigned>{5}}) {
            for (double b : {0.4, 1.0}) {
                auto r = synthetic(Algorithm::vqe, Model::ising, 4, b, m);
                r.fidelity = 1.0;
                w.write(r);
            }
        }
    }
    const auto files = emit_plot_data(dir / "results.csv", Panel::fig3, dir / "plots");
    EXPECT_EQ(files.size(), 4u);
    const auto lines = read_lines(dir / "plots" / "fig3_ising_nd4_na4_m_inf.dat");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[1], "0.40000000000000002 9.9999999999999998e-17");
    EXPECT_TRUE(fs::exists(dir / "plots" / "fig3_ising_nd4_na4_m1.dat"));
    EXPECT_TRUE(fs::exists(dir / "plots" / "fig3_ising_nd4_na4_m5.dat"));
}

TEST(PlotData, Fig2SeriesPerTemperatureAndAlgorithm) {
    const auto dir = scratch("fig2");
    fs::create_directories(dir);
    {
        CsvWriter w(dir / "history.csv");
        for (Algorithm a : {Algorithm::qaoa, Algorithm::baseline})
            for (double b : {0.2, 1.0, 2.6})
                for (std::size_t it = 0; it <= 3; ++it) w.write(synthetic(a, Model::ising, 4, b, std::nullopt, it));
    }
    const auto files = emit_plot_data(dir / "history.csv", Panel::fig2, dir / "plots");
    EXPECT_EQ(files.size(), 2u * (3 + 1));
    const auto lines = read_lines(dir / "plots" / "fig2a_qaoa_ising_nd4_binv2.6.dat");
    EXPECT_EQ(lines.size(), 5u);
    const auto b = read_lines(dir / "plots" / "fig2b_baseline_ising_nd4_cnot.dat");
    ASSERT_EQ(b.size(), 4u);
    EXPECT_EQ(b[1], "0.20000000000000001 22 0.94000000000000006");
}

TEST(PlotData, EmptyOrIncompleteInputWritesNothing) {
    const auto dir = scratch("empty");
    fs::create_directories(dir);
    { CsvWriter w(dir / "results.csv"); }
    EXPECT_THROW(emit_plot_data(dir / "results.csv", Panel::fig1, dir / "plots"), ConfigError);
    EXPECT_FALSE(fs::exists(dir / "plots"));
    std::ofstream(dir / "bad.csv") << "model,beta_inv\nising,1.0\n";
    EXPECT_THROW(emit_plot_data(dir / "bad.csv", Panel::fig3, dir / "plots"), ConfigError);
    EXPECT_FALSE(fs::exists(dir / "plots"));
    EXPECT_THROW(parse_panel("fig4"), ConfigError);
}

TEST(Gradcheck, SmallRunPassesAndReportsWorstIndex) {
    const auto rep = gradcheck(1, 6);
    EXPECT_TRUE(rep.pass()) << format_report(rep);
    ASSERT_EQ(rep.trials.size(), 6u);
    for (const auto &t : rep.trials) EXPECT_LT(t.worst_index, t.n_params);
    const auto text = format_report(rep);
    EXPECT_NE(text.find("worst_index"), std::string::npos);
    EXPECT_NE(text.find("# result PASS"), std::string::npos);
}

TEST(Gradcheck, ZeroParametersAndBadTrialCount) {
    const auto rep = gradcheck(0, 1, true);
    EXPECT_LT(rep.max_deviation, 1e-6);
    EXPECT_THROW(gradcheck(0, 0), ConfigError);
}
