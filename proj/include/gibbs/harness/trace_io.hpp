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
 * One JSON document per restart: the cell description, the reference,
 * the generator sequence with final parameters, and the per-iteration
 * trace. Doubles are written in shortest round-trip form, so
 * replay_ansatz() rebuilds the exact parameter bits.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "../adapt.hpp"
#include "../errors.hpp"
#include "config.hpp"

namespace gibbs::harness {

inline constexpr const char *kTraceSchema = "gibbs-trace v1";

struct TraceHeader {
    std::string run_id;
    Algorithm algorithm = Algorithm::vqe;
    Model model = Model::ising;
    std::size_t n_data = 0;
    std::size_t n_ancilla = 0;
    double beta_inv = 0.0;
    std::optional<unsigned> truncation;
    std::size_t restart = 0;
    std::uint64_t seed = 0;
    double gamma0 = 0.0;
    bool selected = false;
};

inline nlohmann::json trace_header_json(const TraceHeader &h) {
    nlohmann::json j;
    j["schema"] = kTraceSchema;
    j["run_id"] = h.run_id;
    j["algorithm"] = to_string(h.algorithm);
    j["model"] = to_string(h.model);
    j["n_data"] = h.n_data;
    j["n_ancilla"] = h.n_ancilla;
    j["beta_inv"] = h.beta_inv;
    j["truncation"] = h.truncation ? nlohmann::json(*h.truncation) : nlohmann::json("exact");
    j["restart"] = h.restart;
    j["seed"] = h.seed;
    j["gamma0"] = h.gamma0;
    j["selected"] = h.selected;
    return j;
}

inline nlohmann::json trace_json(const TraceHeader &h, const AdaptRun &run) {
    nlohmann::json j = trace_header_json(h);
    j["status"] = "ok";
    const auto &a = run.ansatz;
    j["reference"] = {{"kind", a.reference.kind == Reference::Kind::singlet ? "singlet" : "random_y"},
                      {"angles", a.reference.angles}};
    auto &layers = j["layers"] = nlohmann::json::array();
    for (const auto &l : a.layers) {
        nlohmann::json e{{"generator", l.generator.label()}, {"alpha", l.alpha}};
        if (a.layered()) e["gamma"] = l.gamma;
        layers.push_back(std::move(e));
    }
    const auto &t = run.trace;
    j["initial"] = {{"objective", t.initial_objective},
                    {"fidelity", t.initial_fidelity},
                    {"cnot_count", t.initial_cnot_count}};
    auto &its = j["iterations"] = nlohmann::json::array();
    for (const auto &r : t.iterations) {
        its.push_back({{"iteration", r.iteration},
                       {"generator", r.generator},
                       {"selection_gradient", r.selection_gradient},
                       {"pool_gradient_norm", r.pool_gradient_norm},
                       {"objective", r.objective},
                       {"fidelity", r.fidelity},
                       {"cnot_count", r.cnot_count},
                       {"optimizer_gradient_norm", r.optimizer_gradient_norm},
                       {"optimizer_iterations", r.optimizer_iterations},
                       {"optimizer_status", to_string(r.optimizer_status)},
                       {"wall_ms", r.wall_ms}});
    }
    j["final_pool_gradient_norm"] = t.final_pool_gradient_norm;
    j["termination"] = to_string(t.termination);
    return j;
}

inline nlohmann::json failed_trace_json(const TraceHeader &h, const std::string &error) {
    nlohmann::json j = trace_header_json(h);
    j["status"] = "failed";
    j["error"] = error;
    return j;
}

/// Writes `doc` to `path` via a temporary file and rename.
inline void write_json_atomic(const std::filesystem::path &path, const nlohmann::json &doc) {
    const auto tmp = std::filesystem::path(path).concat(".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << doc.dump(1) << '\n';
        if (!out.flush()) throw ConfigError("write failed on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ConfigError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline nlohmann::json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// Rebuilds the ansatz stored in a trace document, parameters included.
inline Ansatz replay_ansatz(const nlohmann::json &doc) {
    try {
        if (doc.at("schema") != kTraceSchema) throw ConfigError("trace: unknown schema");
        if (doc.at("status") != "ok") throw ConfigError("trace: restart did not complete");
        const std::string algo = doc.at("algorithm");
        const std::string model = doc.at("model");
        const std::size_t n_data = doc.at("n_data");
        const std::size_t n_anc = doc.at("n_ancilla");
        Ansatz a;
        a.n_data = n_data;
        a.n_ancilla = n_anc;
        a.flavor = algo == "vqe" ? Flavor::vqe : algo == "qaoa" ? Flavor::qaoa : Flavor::baseline;
        const auto &ref = doc.at("reference");
        if (ref.at("kind") == "singlet") {
            a.reference.kind = Reference::Kind::singlet;
        } else {
            a.reference.kind = Reference::Kind::random_y;
            a.reference.angles = ref.at("angles").get<std::vector<double>>();
        }
        if (a.layered()) {
            const auto h = model_hamiltonian(model == "xy" ? Model::xy : Model::ising, n_data);
            a.cost = std::make_shared<const HermitianOperator>(doubled_hamiltonian(h));
            a.cost_layer_cnots = cost_layer_cnots(h);
        }
        for (const auto &l : doc.at("layers")) {
            const std::string g = l.at("generator");
            AnsatzLayer layer{g == "H_AD" ? PoolOperator::sum_entangler(n_data)
                                          : PoolOperator::from_pauli(PauliString::parse(g)),
                              l.at("alpha").get<double>(), a.layered() ? l.at("gamma").get<double>() : 0.0};
            a.layers.push_back(std::move(layer));
        }
        return a;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("trace: ") + e.what());
    }
}

} // namespace gibbs::harness
