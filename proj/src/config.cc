// Copyright 2026 The AnyonLab Authors
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

#include "anyonlab/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <iterator>
#include <numbers>
#include <set>

#include "anyonlab/error.h"
#include "anyonlab/fixtures.h"

namespace anyonlab {

namespace {

[[noreturn]] void bad(const std::string &field, const std::string &what) {
    throw Error(ErrorCode::InvalidConfig, "field '" + field + "': " + what);
}

MonodromySpec resolve_monodromy(const Json &j, std::string &name) {
    if (j.is_string()) {
        name = j.get<std::string>();
        return load_fixture(name).monodromy;
    }
    if (!j.is_object()) {
        bad("monodromy", "expected a fixture name or an object");
    }
    if (j.contains("fixture")) {
        name = get_string(j, "fixture", "monodromy");
        return load_fixture(name).monodromy;
    }
    if (j.contains("file")) {
        name = get_string(j, "file", "monodromy");
        return fixture_from_json(read_json_file(name), name).monodromy;
    }
    name = "inline";
    const Json &dims = require(j, "dims", "monodromy");
    std::size_t di = get_uint(dims, "incoming", "monodromy.dims");
    std::size_t ds = get_uint(dims, "stationary", "monodromy.dims");
    return MonodromySpec::from_monodromy(matrix_from_json(require(j, "matrix", "monodromy"), "monodromy.matrix"), di,
                                         ds);
}

ComplexVector pair_state(const Json &init, const MonodromySpec &spec) {
    if (init.contains("psi")) {
        return vector_from_json(init["psi"], "initial_state.psi");
    }
    if (init.contains("spectral_weights")) {
        const Json &list = init["spectral_weights"];
        if (!list.is_array()) {
            bad("initial_state.spectral_weights", "expected an array");
        }
        std::vector<std::pair<Complex, double>> weights;
        for (std::size_t k = 0; k < list.size(); ++k) {
            std::string ctx = "initial_state.spectral_weights[" + std::to_string(k) + "]";
            weights.emplace_back(complex_from_json(require(list[k], "eigenvalue", ctx), ctx + ".eigenvalue"),
                                 get_double(list[k], "weight", ctx));
        }
        return state_with_weights(spec.spectrum, weights);
    }
    bad("initial_state", "needs 'psi' or 'spectral_weights'");
}

void check_keys(const Json &j, const std::set<std::string> &allowed, const std::string &context) {
    for (const auto &[key, value] : j.items()) {
        if (!allowed.contains(key)) {
            bad(context.empty() ? key : context + "." + key, "unknown key");
        }
    }
}

}  // namespace

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::InvalidConfig,
                    path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

ExperimentConfig parse_experiment(const Json &j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    }
    check_keys(j,
               {"description", "scheme", "apparatus", "monodromy", "initial_state", "runs", "trials", "seed",
                "lock_threshold", "engine", "record_runs", "stabilization_tol", "analysis", "output", "formats"},
               "");
    ExperimentConfig out;
    out.source = j;
    SchemeConfig &cfg = out.scheme;
    cfg.scheme = parse_scheme(get_string(j, "scheme", ""));
    cfg.apparatus = apparatus_from_json(require(j, "apparatus", ""));
    cfg.monodromy = resolve_monodromy(require(j, "monodromy", ""), out.monodromy_name);
    cfg.runs = get_uint(j, "runs", "");
    cfg.trials = get_uint(j, "trials", "");
    cfg.seed = get_uint(j, "seed", "");
    if (j.contains("lock_threshold")) {
        cfg.lock_threshold = get_double(j, "lock_threshold", "");
    }
    if (j.contains("engine")) {
        cfg.engine = parse_engine(get_string(j, "engine", ""));
    }
    if (j.contains("record_runs")) {
        if (!j["record_runs"].is_boolean()) {
            bad("record_runs", "expected true or false");
        }
        cfg.record_runs = j["record_runs"].get<bool>();
    }
    if (j.contains("stabilization_tol")) {
        cfg.stabilization_tol = get_double(j, "stabilization_tol", "");
    }

    const Json &init = require(j, "initial_state", "");
    check_keys(init, {"psi", "spectral_weights", "psi_b", "rho_a", "psi_a", "joint", "env_dim"}, "initial_state");
    switch (cfg.scheme) {
        case Scheme::ManyToMany:
        case Scheme::OneToOne:
            cfg.psi = pair_state(init, cfg.monodromy);
            break;
        case Scheme::ManyToOne:
            cfg.psi_b = vector_from_json(require(init, "psi_b", "initial_state"), "initial_state.psi_b");
            if (init.contains("psi_a")) {
                ComplexVector a = vector_from_json(init["psi_a"], "initial_state.psi_a");
                cfg.rho_a = ComplexMatrix::outer(a, a);
            } else {
                const Json &r = require(init, "rho_a", "initial_state");
                if (r.is_string()) {
                    if (r.get<std::string>() != "maximally_mixed") {
                        bad("initial_state.rho_a", "unknown preset '" + r.get<std::string>() + "'");
                    }
                    cfg.rho_a = DensityMatrix::maximally_mixed(cfg.monodromy.dim_stationary).matrix();
                } else {
                    cfg.rho_a = matrix_from_json(r, "initial_state.rho_a");
                }
            }
            break;
        case Scheme::ConjectureProbe:
            cfg.psi_b = vector_from_json(require(init, "psi_b", "initial_state"), "initial_state.psi_b");
            if (init.contains("psi_a")) {
                cfg.joint = vector_from_json(init["psi_a"], "initial_state.psi_a");
                cfg.env_dim = 1;
            } else {
                cfg.joint = vector_from_json(require(init, "joint", "initial_state"), "initial_state.joint");
                cfg.env_dim = init.contains("env_dim") ? get_uint(init, "env_dim", "initial_state") : 1;
            }
            break;
    }

    if (j.contains("analysis")) {
        const Json &a = j["analysis"];
        check_keys(a, {"n", "z_cut"}, "analysis");
        if (a.contains("n")) {
            if (!a["n"].is_array() || a["n"].empty()) {
                bad("analysis.n", "expected a non-empty array of run counts");
            }
            out.analysis_n.clear();
            for (const auto &v : a["n"]) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
                    bad("analysis.n", "expected non-negative integers");
                }
                out.analysis_n.push_back(v.get<std::size_t>());
            }
        }
        if (a.contains("z_cut")) {
            out.z_cut = get_double(a, "z_cut", "analysis");
            if (!(out.z_cut > 0)) {
                bad("analysis.z_cut", "must be positive");
            }
        }
    }
    if (j.contains("output")) {
        out.output_dir = get_string(j, "output", "");
    }
    if (j.contains("formats")) {
        if (!j["formats"].is_array()) {
            bad("formats", "expected an array");
        }
        out.formats.clear();
        for (const auto &f : j["formats"]) {
            std::string s = f.is_string() ? f.get<std::string>() : "";
            if (s != "json" && s != "jsonl" && s != "csv") {
                bad("formats", "entries must be json, jsonl or csv");
            }
            out.formats.push_back(s);
        }
    }
    cfg.validate();
    return out;
}

std::string config_hash(const Json &j) {
    std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> preset_names() {
    return {"paper_ordinary",       "paper_ab_pi",           "paper_na_half",          "paper_na_plus",
            "paper_na_minus",       "paper_one_to_one_38",   "paper_one_to_one_plus", "paper_one_to_one_minus",
            "paper_many_to_one",    "paper_many_to_one_plus", "paper_many_to_one_probe"};
}

Json builtin_preset(const std::string &name) {
    auto weights = [](double p_plus) {
        return Json{{"spectral_weights", Json::array({Json{{"eigenvalue", {1.0, 0.0}}, {"weight", p_plus}},
                                                      Json{{"eigenvalue", {-1.0, 0.0}}, {"weight", 1 - p_plus}}})}};
    };
    auto base = [](const char *scheme, const char *description) {
        return Json{{"description", description}, {"scheme", scheme}, {"apparatus", "paper_example"},
                    {"seed", 20260101}, {"engine", "spectral"}, {"formats", {"json", "jsonl", "csv"}}};
    };
    Json j;
    if (name == "paper_ordinary") {
        j = base("many_to_many", "ordinary interference: trivial monodromy, expect (9/10, 1/10)");
        j["monodromy"] = "trivial";
        j["initial_state"] = {{"psi", {1.0}}};
        j["runs"] = 10000;
        j["trials"] = 10;
    } else if (name == "paper_ab_pi") {
        j = base("many_to_many", "Aharonov-Bohm phase -1, expect (1/10, 9/10)");
        j["monodromy"] = "ab_pi";
        j["initial_state"] = {{"psi", {1.0}}};
        j["runs"] = 10000;
        j["trials"] = 10;
    } else if (name == "paper_na_half" || name == "paper_na_plus" || name == "paper_na_minus") {
        double p = name == "paper_na_half" ? 0.5 : name == "paper_na_plus" ? 1.0 : 0.0;
        j = base("many_to_many", "non-abelian many-to-many with eigenvalues +1 and -1");
        j["monodromy"] = "explicitR2";
        j["initial_state"] = weights(p);
        j["runs"] = 10000;
        j["trials"] = 10;
    } else if (name == "paper_one_to_one_38" || name == "paper_one_to_one_plus" ||
               name == "paper_one_to_one_minus") {
        double p = name == "paper_one_to_one_38" ? 0.375 : name == "paper_one_to_one_plus" ? 1.0 : 0.0;
        j = base("one_to_one", "one-to-one locking with spectral weights (p, 1 - p) on eigenvalues +1, -1");
        j["monodromy"] = "explicitR2";
        j["initial_state"] = weights(p);
        j["runs"] = 400;
        j["trials"] = 20000;
        j["analysis"] = {{"n", {1, 10, 100, 200}}, {"z_cut", 25.0}};
    } else if (name == "paper_many_to_one" || name == "paper_many_to_one_plus") {
        j = base("many_to_one", "many-to-one with |+> beam; U = diag(-1/2, 1, -1/2)");
        j["monodromy"] = "explicitR2";
        if (name == "paper_many_to_one") {
            j["initial_state"] = {{"psi_b", {1.0, 0.0}}, {"rho_a", "maximally_mixed"}};
        } else {
            j["initial_state"] = {{"psi_b", {1.0, 0.0}}, {"psi_a", {0.0, 1.0, 0.0}}};
        }
        j["runs"] = 400;
        j["trials"] = 20000;
        j["analysis"] = {{"n", {1, 10, 100, 200}}, {"z_cut", 25.0}};
    } else if (name == "paper_many_to_one_probe") {
        j = base("many_to_one_conjecture_probe", "full-state many-to-one from an A state entangled with a partner");
        const double h = 1 / std::numbers::sqrt2;
        j["apparatus"] = apparatus_to_json(Apparatus{BeamSplitter::from_left({0, h}, {h, 0}),
                                                     BeamSplitter::from_left({0, h}, {h, 0}), 1.0, 0.0});
        j["monodromy"] = "explicitR2";
        j["initial_state"] = {{"psi_b", {1.0, 0.0}}, {"joint", {h, 0.0, 0.0, h, 0.0, 0.0}}, {"env_dim", 2}};
        j["runs"] = 9;
        j["trials"] = 2000;
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown preset '" + name + "'");
    }
    return j;
}

LikelihoodFamily family_for(const SchemeConfig &cfg) {
    BranchSet branches = scheme_branches(cfg);
    std::vector<double> w;
    if (cfg.scheme == Scheme::ManyToMany || cfg.scheme == Scheme::OneToOne) {
        w = cfg.monodromy.spectrum.weights(cfg.psi);
    } else {
        UOperator u = compute_U(cfg.monodromy.monodromy, cfg.rho_b(), cfg.monodromy.dim_incoming,
                                cfg.monodromy.dim_stationary);
        w = u.spectrum.weights(cfg.initial_rho_a());
    }
    double total = 0;
    for (double &x : w) {
        x = std::max(0.0, x);
        total += x;
    }
    for (double &x : w) {
        x /= total;
    }
    return LikelihoodFamily{branches.patterns, w};
}

namespace {

Json pattern_json(const PatternEstimate &p) {
    return Json{{"n", p.n},
                {"count_d1", p.count_d1},
                {"count_d2", p.count_d2},
                {"p_d1", p.frequency(Detector::D1)},
                {"p_d2", p.frequency(Detector::D2)}};
}

}  // namespace

Json summary_to_json(const SimulationSummary &s) {
    Json locks = Json::array();
    for (const LockBin &b : s.bins) {
        locks.push_back(Json{{"eigenvalue", complex_to_json(b.value)},
                             {"count", b.count},
                             {"frequency", b.frequency},
                             {"post_lock_pattern", pattern_json(b.post_lock)},
                             {"expected_pattern", distribution_to_json(b.expected_pattern)},
                             {"mean_runs_to_lock", b.mean_runs_to_lock}});
    }
    Json unresolvable = Json::array();
    for (const auto &[a, b] : s.unresolvable) {
        unresolvable.push_back(Json::array({complex_to_json(a), complex_to_json(b)}));
    }
    return Json{{"scheme", scheme_name(s.scheme)},
                {"trials", s.trials},
                {"runs", s.runs},
                {"pattern", pattern_json(s.pattern)},
                {"expected_pattern", distribution_to_json(s.expected_pattern)},
                {"locked_trials", s.locked_trials},
                {"locks", std::move(locks)},
                {"mean_locked_value", complex_to_json(s.mean_locked_value)},
                {"locked_value_stderr", s.locked_value_stderr},
                {"mean_final_expectation", complex_to_json(s.mean_final_expectation)},
                {"expected_average", complex_to_json(s.expected_average)},
                {"unresolvable", std::move(unresolvable)}};
}

Json trial_to_json(const TrialResult &t) {
    Json j{{"trial", t.trial},
           {"locked", t.lock.locked},
           {"locked_value", t.lock.locked ? complex_to_json(t.lock.locked_value) : Json(nullptr)},
           {"runs_to_lock", t.lock.runs_to_lock ? Json(*t.lock.runs_to_lock) : Json(nullptr)},
           {"count_d1", t.pattern.count_d1},
           {"count_d2", t.pattern.count_d2},
           {"n", t.pattern.n}};
    if (!t.runs.empty()) {
        Json runs = Json::array();
        for (const RunRecord &r : t.runs) {
            runs.push_back(Json{{"run", r.run_index},
                                {"outcome", r.outcome == Detector::D1 ? "D1" : "D2"},
                                {"pre_expectation", complex_to_json(r.pre_expectation)},
                                {"p_d1", r.probabilities.p_d1}});
        }
        j["runs"] = std::move(runs);
    }
    return j;
}

Json probe_to_json(const ProbeReport &r) {
    Json clusters = Json::array();
    for (const ProbeCluster &c : r.clusters) {
        clusters.push_back(
            Json{{"value", complex_to_json(c.value)}, {"count", c.count}, {"matches_kappa", c.matches_kappa}});
    }
    Json kappas = Json::array();
    for (Complex k : r.kappas) {
        kappas.push_back(complex_to_json(k));
    }
    return Json{{"scheme", scheme_name(Scheme::ConjectureProbe)},
                {"trials", r.trials.size()},
                {"stabilized_trials", r.stabilized},
                {"max_dim", r.max_dim},
                {"kappas", std::move(kappas)},
                {"clusters", std::move(clusters)}};
}

}  // namespace anyonlab
