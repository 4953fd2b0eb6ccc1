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

#include "anyonlab/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "anyonlab/config.h"
#include "anyonlab/convergence.h"
#include "anyonlab/error.h"
#include "anyonlab/fixtures.h"
#include "anyonlab/schemes.h"

namespace anyonlab {

namespace {

constexpr double kVerifyTol = 1e-10;

struct Loaded {
    ExperimentConfig exp;
    std::string hash;
};

Loaded load(const CliOptions &opts) {
    if (opts.config_path.empty() == opts.preset.empty()) {
        throw Error(ErrorCode::InvalidConfig, "exactly one of --config or --preset is required");
    }
    Json source = opts.preset.empty() ? read_json_file(opts.config_path) : builtin_preset(opts.preset);
    Loaded l{parse_experiment(source), config_hash(source)};
    if (opts.out_dir) {
        l.exp.output_dir = *opts.out_dir;
    }
    if (!opts.formats.empty()) {
        for (const auto &f : opts.formats) {
            if (f != "json" && f != "jsonl" && f != "csv") {
                throw Error(ErrorCode::InvalidConfig, "--format: expected json, jsonl or csv, got '" + f + "'");
            }
        }
        l.exp.formats = opts.formats;
    }
    if (opts.threads == 0) {
        throw Error(ErrorCode::InvalidConfig, "--threads must be at least 1");
    }
    return l;
}

bool wants(const ExperimentConfig &exp, const std::string &format) {
    return std::find(exp.formats.begin(), exp.formats.end(), format) != exp.formats.end();
}

std::ofstream open_output(const std::filesystem::path &dir, const std::string &file) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / file, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + (dir / file).string());
    }
    return f;
}

Json stamped(Json j, const std::string &hash) {
    j["config_hash"] = hash;
    j["version"] = kToolVersion;
    return j;
}

std::string csv_stamp(const std::string &hash) {
    return "# config_hash=" + hash + " version=" + kToolVersion + "\n";
}

template <typename F>
int guarded(std::ostream &err, const char *command, F &&body) {
    try {
        return body();
    } catch (const Error &e) {
        err << command << ": " << e.what() << "\n";
        return e.is_numerical() ? kExitNumerical : kExitConfig;
    } catch (const std::exception &e) {
        err << command << ": " << e.what() << "\n";
        return kExitIo;
    }
}

void write_pattern_csv(std::ostream &out, const SimulationSummary &s) {
    out << "eigenvalue_re,eigenvalue_im,count,frequency,runs,p_d1,p_d2,expected_p_d1,expected_p_d2\n";
    out << std::setprecision(17);
    for (const LockBin &b : s.bins) {
        out << b.value.real() << "," << b.value.imag() << "," << b.count << "," << b.frequency << ","
            << b.post_lock.n << "," << b.post_lock.frequency(Detector::D1) << ","
            << b.post_lock.frequency(Detector::D2) << "," << b.expected_pattern.p_d1 << ","
            << b.expected_pattern.p_d2 << "\n";
    }
    out << "nan,nan," << s.trials << ",1," << s.pattern.n << "," << s.pattern.frequency(Detector::D1) << ","
        << s.pattern.frequency(Detector::D2) << "," << s.expected_pattern.p_d1 << "," << s.expected_pattern.p_d2
        << "\n";
}

Json probe_trial_json(const ProbeTrial &t, std::size_t index) {
    Json values = Json::array();
    for (Complex z : t.expectations) {
        values.push_back(complex_to_json(z));
    }
    return Json{{"trial", index},
                {"stabilized", t.stabilized},
                {"final_value", complex_to_json(t.final_value)},
                {"expectations", std::move(values)}};
}

Fixture load_fixture_arg(const std::string &arg) {
    std::filesystem::path p(arg);
    if (p.has_extension() || arg.find('/') != std::string::npos) {
        return fixture_from_json(read_json_file(arg), p.stem().string());
    }
    return load_fixture(arg);
}

}  // namespace

int cmd_run(const CliOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, "run", [&] {
        Loaded l = load(opts);
        const SchemeConfig &cfg = l.exp.scheme;
        std::filesystem::path dir(l.exp.output_dir);

        if (cfg.scheme == Scheme::ConjectureProbe) {
            ProbeReport report = probe_conjecture(cfg, opts.threads);
            if (wants(l.exp, "json")) {
                open_output(dir, "summary.json") << stamped(probe_to_json(report), l.hash).dump(2) << "\n";
            }
            if (wants(l.exp, "jsonl")) {
                auto f = open_output(dir, "trials.jsonl");
                for (std::size_t i = 0; i < report.trials.size(); ++i) {
                    f << stamped(probe_trial_json(report.trials[i], i), l.hash).dump() << "\n";
                }
            }
            out << "probe: " << report.stabilized << " of " << report.trials.size() << " trials stabilized, "
                << report.clusters.size() << " clusters\n";
            return kExitOk;
        }

        std::vector<TrialResult> trials = run_trials(cfg, opts.threads);
        SimulationSummary summary = summarize(cfg, trials);
        if (wants(l.exp, "json")) {
            Json j = stamped(summary_to_json(summary), l.hash);
            j["monodromy"] = l.exp.monodromy_name;
            j["seed"] = cfg.seed;
            open_output(dir, "summary.json") << j.dump(2) << "\n";
        }
        if (wants(l.exp, "jsonl")) {
            auto f = open_output(dir, "trials.jsonl");
            for (const TrialResult &t : trials) {
                f << stamped(trial_to_json(t), l.hash).dump() << "\n";
            }
        }
        if (wants(l.exp, "csv")) {
            auto f = open_output(dir, "pattern.csv");
            f << csv_stamp(l.hash);
            write_pattern_csv(f, summary);
        }

        out << scheme_name(cfg.scheme) << ": " << summary.trials << " trials x " << summary.runs << " runs, "
            << summary.locked_trials << " locked\n";
        out << std::setprecision(6);
        for (const LockBin &b : summary.bins) {
            out << "  eigenvalue (" << b.value.real() << ", " << b.value.imag() << "): frequency " << b.frequency
                << ", pattern (" << b.post_lock.frequency(Detector::D1) << ", "
                << b.post_lock.frequency(Detector::D2) << ")\n";
        }
        return kExitOk;
    });
}

int cmd_analyze(const CliOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, "analyze", [&] {
        Loaded l = load(opts);
        LikelihoodFamily fam = family_for(l.exp.scheme);
        std::filesystem::path dir(l.exp.output_dir);
        std::vector<std::size_t> ns = l.exp.analysis_n;
        std::sort(ns.begin(), ns.end());
        ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

        Json branches = Json::array();
        for (const auto &b : fam.branches) {
            branches.push_back(distribution_to_json(b));
        }
        Json report{{"branches", branches}, {"weights", fam.weights}, {"z_cut", l.exp.z_cut}};
        Json rows = Json::array();
        bool warned = false;

        for (std::size_t n : ns) {
            Json row{{"n", n}};
            if (fam.branches.size() == 2) {
                try {
                    Moments m = moments(fam, n);
                    row["moments"] = Json{{"mean_a", m.mean_a}, {"var_a", m.var_a}, {"mean_b", m.mean_b},
                                          {"var_b", m.var_b},   {"m_a", m.m_a},     {"s2_a", m.s2_a},
                                          {"m_b", m.m_b},       {"s2_b", m.s2_b}};
                    row["unresolvable"] = !m.resolvable;
                    if (!m.resolvable && !warned) {
                        err << "analyze: warning: the two branches have identical detector distributions\n";
                        warned = true;
                    }
                } catch (const Error &e) {
                    if (e.code() != ErrorCode::ZeroLikelihood) {
                        throw;
                    }
                    row["moments"] = nullptr;
                    row["moments_note"] = e.what();
                    row["unresolvable"] = false;
                }
                LockingMasses lm = locking_masses(fam, n, l.exp.z_cut);
                row["locking"] = Json{{"upper", lm.upper}, {"lower", lm.lower}, {"mid", lm.mid}};
                ZDistribution dist = z_distribution(fam, n);
                row["total_mass"] = dist.total_mass();
                std::ostringstream name;
                name << "z_dist_n" << n << ".csv";
                for (const std::string &file : {name.str(), std::string("z_dist.csv")}) {
                    if (file == "z_dist.csv" && n != ns.back()) {
                        continue;
                    }
                    auto f = open_output(dir, file);
                    f << csv_stamp(l.hash);
                    write_z_csv(f, dist);
                }
            } else {
                MultiZDistribution dist = z_distribution_multi(fam, n);
                row["region_masses"] = dist.region_masses(l.exp.z_cut);
                row["total_mass"] = dist.total_mass();
                row["unresolvable"] = !dist.unresolvable.empty();
                if (!dist.unresolvable.empty() && !warned) {
                    err << "analyze: warning: some branches have identical detector distributions\n";
                    warned = true;
                }
                std::ostringstream name;
                name << "z_dist_n" << n << ".csv";
                for (const std::string &file : {name.str(), std::string("z_dist.csv")}) {
                    if (file == "z_dist.csv" && n != ns.back()) {
                        continue;
                    }
                    auto f = open_output(dir, file);
                    f << csv_stamp(l.hash);
                    write_multi_csv(f, dist);
                }
            }
            rows.push_back(std::move(row));
        }
        report["analyses"] = std::move(rows);
        if (fam.branches.size() == 2) {
            ConvolutionReport c = convolution_check(fam);
            report["convolution"] = Json{{"component_residual", c.component_residual},
                                         {"mixture_residual", c.mixture_residual},
                                         {"degenerate", c.degenerate}};
        }
        open_output(dir, "moments.json") << stamped(report, l.hash).dump(2) << "\n";

        out << std::setprecision(9);
        for (const auto &row : report["analyses"]) {
            out << "n=" << row["n"].get<std::size_t>();
            if (row.contains("locking")) {
                out << "  upper=" << row["locking"]["upper"].get<double>()
                    << "  lower=" << row["locking"]["lower"].get<double>()
                    << "  mid=" << row["locking"]["mid"].get<double>();
            } else {
                out << "  regions=" << row["region_masses"].dump();
            }
            out << "\n";
        }
        return kExitOk;
    });
}

int cmd_verify(const std::string &fixture_arg, std::ostream &out, std::ostream &err) {
    return guarded(err, "verify", [&] {
        Fixture f = load_fixture_arg(fixture_arg);
        const MonodromySpec &m = f.monodromy;

        struct Row {
            std::string check;
            double residual;
        };
        std::vector<Row> rows;

        double unitary = std::max({unitarity_residual(m.monodromy), unitarity_residual(m.ccw),
                                   unitarity_residual(m.cw), unitarity_residual(m.ret)});
        for (const auto &[key, braid] : f.registry.entries()) {
            unitary = std::max(unitary, unitarity_residual(braid.matrix));
        }
        rows.push_back({"unitarity", unitary});
        rows.push_back({"normality", normality_residual(m.monodromy)});
        SpectralResiduals sr = spectral_residuals(m.monodromy, m.spectrum);
        rows.push_back({"spectral reconstruction", sr.reconstruction});
        rows.push_back({"projector completeness", sr.completeness});
        rows.push_back({"projector orthogonality", sr.orthogonality});
        rows.push_back({"return pass", max_abs_diff(m.ret * m.ccw, m.monodromy)});
        rows.push_back({"inverse pass", max_abs_diff(m.cw, m.ret.adjoint())});
        YangBaxterReport yb = check_yang_baxter(f.registry, {}, f.yang_baxter_max_copies);
        rows.push_back({"yang-baxter", yb.max_residual});

        out << "fixture " << f.name << " (dim B = " << m.dim_incoming << ", dim A = " << m.dim_stationary << ")\n";
        out << std::left << std::setw(26) << "check" << std::setw(14) << "residual" << "status\n";
        std::vector<std::string> failing;
        for (const Row &r : rows) {
            bool ok = r.residual <= kVerifyTol;
            std::ostringstream cell;
            cell << std::scientific << std::setprecision(3) << r.residual;
            out << std::left << std::setw(26) << r.check << std::setw(14) << cell.str() << (ok ? "ok" : "FAIL")
                << "\n";
            if (!ok) {
                failing.push_back(r.check);
            }
        }
        out << "eigenvalues:";
        for (std::size_t k = 0; k < m.spectrum.size(); ++k) {
            Complex z = m.spectrum.eigenvalues[k];
            std::size_t mult = static_cast<std::size_t>(std::lround(m.spectrum.projectors[k].trace().real()));
            out << " (" << std::fixed << std::setprecision(6) << z.real() << ", " << z.imag() << ")x" << mult;
        }
        out << std::defaultfloat << "\n";
        if (!failing.empty()) {
            err << "verify: failing checks:";
            for (const auto &c : failing) {
                err << " " << c;
            }
            err << "\n";
            return kExitNumerical;
        }
        return kExitOk;
    });
}

int cmd_list_fixtures(std::ostream &out) {
    for (const std::string &name : list_fixtures()) {
        out << name << "\n";
    }
    out << "presets:\n";
    for (const std::string &name : preset_names()) {
        out << "  " << name << "\n";
    }
    return kExitOk;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Non-abelian anyon interferometry simulator", "anyonlab"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CliOptions opts;
    std::string fixture;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opts.config_path, "Experiment config (JSON)");
        sub->add_option("--preset", opts.preset, "Built-in experiment preset");
        sub->add_option("--out", opts.out_dir, "Output directory (overrides the config)");
        sub->add_option("--threads", opts.threads, "Worker threads")->default_val(1);
        sub->add_option("--format", opts.formats, "Output format: json, jsonl or csv (repeatable)")
            ->take_all()
            ->allow_extra_args(false);
    };
    CLI::App *run = app.add_subcommand("run", "Simulate the configured scheme");
    add_common(run);
    CLI::App *analyze = app.add_subcommand("analyze", "Exact log-ratio distributions and locking masses");
    add_common(analyze);
    CLI::App *verify = app.add_subcommand("verify", "Invariant checks on a fixture");
    verify->add_option("fixture", fixture, "Fixture name or fixture JSON file")->required();
    app.add_subcommand("list-fixtures", "List fixtures and presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion &e) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "anyonlab: " << e.what() << "\n";
        return kExitConfig;
    }

    if (run->parsed()) {
        return cmd_run(opts, out, err);
    }
    if (analyze->parsed()) {
        return cmd_analyze(opts, out, err);
    }
    if (verify->parsed()) {
        return cmd_verify(fixture, out, err);
    }
    return cmd_list_fixtures(out);
}

}  // namespace anyonlab
