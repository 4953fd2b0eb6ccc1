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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gtest/gtest.h"

#include "anyonlab/config.h"
#include "anyonlab/error.h"

using namespace anyonlab;
namespace fs = std::filesystem;

namespace {

fs::path source_dir() {
    const char *env = std::getenv("ANYONLAB_SOURCE_DIR");
    return env != nullptr ? fs::path(env) : fs::path(ANYONLAB_TEST_SOURCE_DIR);
}

class TempDir {
   public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("anyonlab_cli_" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path &path() const {
        return path_;
    }

   private:
    fs::path path_;
};

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string config_error(const std::string &text) {
    try {
        parse_experiment(Json::parse(text));
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "no error for " << text;
    return "";
}

const char *kMinimal = R"({"scheme": "one_to_one", "apparatus": "paper_example", "monodromy": "explicitR2",
    "initial_state": {"psi": [1, 0, 0, 0, 0, 0]}, "runs": 20, "trials": 50, "seed": 3)";

std::string minimal_with(const std::string &extra) {
    return std::string(kMinimal) + extra + "}";
}

int run_args(std::vector<std::string> args, std::string *out_text = nullptr, std::string *err_text = nullptr) {
    std::vector<const char *> argv{"anyonlab"};
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST(parse_experiment, minimal_config) {
    ExperimentConfig exp = parse_experiment(Json::parse(minimal_with("")));
    EXPECT_EQ(exp.scheme.scheme, Scheme::OneToOne);
    EXPECT_EQ(exp.scheme.trials, 50u);
    EXPECT_EQ(exp.scheme.runs, 20u);
    EXPECT_EQ(exp.monodromy_name, "explicitR2");
}

TEST(parse_experiment, errors_name_the_field) {
    EXPECT_NE(config_error(minimal_with(R"(, "trails": 3)")).find("trails"), std::string::npos);
    EXPECT_NE(config_error(R"({"scheme": "one_to_one", "apparatus": "paper_example", "monodromy": "explicitR2",
        "initial_state": {"psi": [1, 0, 0, 0, 0, 0]}, "runs": 20, "trials": 0, "seed": 3})")
                  .find("trials"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"scheme": "sideways", "apparatus": "paper_example", "monodromy": "explicitR2",
        "initial_state": {"psi": [1, 0, 0, 0, 0, 0]}, "runs": 20, "trials": 5, "seed": 3})")
                  .find("scheme"),
              std::string::npos);
    EXPECT_NE(config_error(minimal_with(R"(, "formats": ["xml"])")).find("formats"), std::string::npos);
    EXPECT_NE(config_error(minimal_with(R"(, "analysis": {"n": [-1]})")).find("analysis"), std::string::npos);
}

TEST(parse_experiment, wrong_state_dimension) {
    try {
        parse_experiment(Json::parse(R"({"scheme": "one_to_one", "apparatus": "paper_example",
            "monodromy": "explicitR2", "initial_state": {"psi": [1, 0]}, "runs": 2, "trials": 2, "seed": 1})"));
        FAIL();
    } catch (const Error &e) {
        EXPECT_NE(e.code(), ErrorCode::ZeroLikelihood);
        EXPECT_FALSE(e.is_numerical());
    }
}

TEST(parse_experiment, inline_matrix_and_analysis_n) {
    ExperimentConfig exp = parse_experiment(read_json_file((source_dir() / "configs/inline_matrix.json").string()));
    EXPECT_EQ(exp.scheme.monodromy.dim_incoming * exp.scheme.monodromy.dim_stationary, 4u);
    ExperimentConfig with_n = parse_experiment(Json::parse(minimal_with(R"(, "analysis": {"n": [0, 3, 7]})")));
    EXPECT_EQ(with_n.analysis_n, (std::vector<std::size_t>{0, 3, 7}));
}

TEST(read_json_file, syntax_errors_report_position) {
    TempDir tmp;
    fs::path p = tmp.path() / "broken.json";
    std::ofstream(p) << "{\n  \"scheme\": \"one_to_one\",\n  \"runs\": ,\n}\n";
    try {
        read_json_file(p.string());
        FAIL();
    } catch (const Error &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("broken.json:3:"), std::string::npos) << msg;
    }
}

TEST(presets, all_parse_and_hash_stably) {
    std::set<std::string> hashes;
    for (const std::string &name : preset_names()) {
        Json j = builtin_preset(name);
        EXPECT_NO_THROW(parse_experiment(j)) << name;
        std::string h = config_hash(j);
        EXPECT_EQ(h.size(), 16u);
        EXPECT_EQ(h, config_hash(Json::parse(j.dump())));
        hashes.insert(h);
    }
    EXPECT_EQ(hashes.size(), preset_names().size());
    EXPECT_THROW(builtin_preset("no_such_preset"), Error);
}

TEST(config_hash, fnv1a_of_canonical_dump) {
    // Independent FNV-1a over the compact, key-sorted text.
    Json j = Json::parse(R"({"b": 1, "a": [true, null]})");
    std::string text = R"({"a":[true,null],"b":1})";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    EXPECT_EQ(config_hash(j), buf);
    EXPECT_EQ(config_hash(Json::parse(R"({"a": [true, null], "b": 1})")), buf);
}

TEST(cmd_run, writes_stamped_outputs) {
    TempDir tmp;
    fs::path cfg = tmp.path() / "exp.json";
    std::ofstream(cfg) << minimal_with(R"(, "formats": ["json", "jsonl", "csv"])");
    std::string hash = config_hash(read_json_file(cfg.string()));
    CliOptions opts;
    opts.config_path = cfg.string();
    opts.out_dir = (tmp.path() / "out").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run(opts, out, err), kExitOk) << err.str();

    Json summary = Json::parse(slurp(tmp.path() / "out/summary.json"));
    EXPECT_EQ(summary["config_hash"], hash);
    EXPECT_EQ(summary["version"], kToolVersion);
    EXPECT_EQ(summary["trials"], 50);

    std::ifstream trials(tmp.path() / "out/trials.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(trials, line)) {
        Json t = Json::parse(line);
        EXPECT_EQ(t["config_hash"], hash);
        EXPECT_EQ(t["count_d1"].get<std::size_t>() + t["count_d2"].get<std::size_t>(), 20u);
        ++lines;
    }
    EXPECT_EQ(lines, 50u);

    std::string csv = slurp(tmp.path() / "out/pattern.csv");
    EXPECT_EQ(csv.rfind("# config_hash=" + hash + " version=" + kToolVersion + "\n", 0), 0u);
}

TEST(cmd_run, format_flag_limits_outputs) {
    TempDir tmp;
    fs::path cfg = tmp.path() / "exp.json";
    std::ofstream(cfg) << minimal_with("");
    EXPECT_EQ(run_args({"run", "--config", cfg.string(), "--out", (tmp.path() / "o").string(), "--format", "csv"}),
              kExitOk);
    EXPECT_TRUE(fs::exists(tmp.path() / "o/pattern.csv"));
    EXPECT_FALSE(fs::exists(tmp.path() / "o/summary.json"));
}

TEST(cmd_run, thread_count_does_not_change_results) {
    TempDir tmp;
    for (const char *threads : {"1", "4"}) {
        EXPECT_EQ(run_args({"run", "--preset", "paper_one_to_one_38", "--out", (tmp.path() / threads).string(),
                            "--threads", threads, "--format", "json"}),
                  kExitOk);
    }
    EXPECT_EQ(slurp(tmp.path() / "1/summary.json"), slurp(tmp.path() / "4/summary.json"));
}

TEST(cmd_run, invalid_config_exits_2) {
    std::string err;
    EXPECT_EQ(run_args({"run", "--config", (source_dir() / "configs/invalid_zero_trials.json").string()}, nullptr,
                       &err),
              kExitConfig);
    EXPECT_NE(err.find("trials"), std::string::npos);
    EXPECT_EQ(run_args({"run", "--config", "/nonexistent/anyonlab.json"}), kExitIo);
    EXPECT_EQ(run_args({"run"}), kExitConfig);
}

TEST(cmd_verify, builtin_fixture_passes) {
    std::string out;
    EXPECT_EQ(run_args({"verify", "explicitR2"}, &out), kExitOk);
    EXPECT_EQ(out.find("FAIL"), std::string::npos);
    EXPECT_NE(out.find("(1.000000, 0.000000)x3"), std::string::npos) << out;
    EXPECT_NE(out.find("(-1.000000, 0.000000)x3"), std::string::npos) << out;
}

TEST(cmd_verify, corrupted_fixture_exits_3) {
    std::string out, err;
    EXPECT_EQ(run_args({"verify", (source_dir() / "configs/fixtures/corrupted.json").string()}, &out, &err),
              kExitNumerical);
    EXPECT_NE((out + err).find("NotNormal"), std::string::npos) << out << err;
}

TEST(cmd_verify, fixture_directory_override) {
    TempDir tmp;
    fs::copy_file(source_dir() / "configs/fixtures/z3_clock.json", tmp.path() / "z3_clock.json");
    ::setenv("ANYONLAB_FIXTURES", tmp.path().c_str(), 1);
    std::string listed;
    EXPECT_EQ(run_args({"list-fixtures"}, &listed), kExitOk);
    EXPECT_EQ(run_args({"verify", "z3_clock"}), kExitOk);
    ::unsetenv("ANYONLAB_FIXTURES");
    EXPECT_NE(listed.find("z3_clock"), std::string::npos);
    EXPECT_EQ(run_args({"verify", "z3_clock"}), kExitConfig);
}

TEST(cmd_analyze, single_run_atoms) {
    TempDir tmp;
    fs::path cfg = tmp.path() / "exp.json";
    double h = std::sqrt(0.5);
    Json j = Json::parse(minimal_with(R"(, "analysis": {"n": [1, 200]})"));
    j["initial_state"]["psi"] = Json::array({0, h, 0, 0, h, 0});
    std::ofstream(cfg) << j.dump();
    ASSERT_EQ(run_args({"analyze", "--config", cfg.string(), "--out", tmp.path().string()}), kExitOk);

    Json report = Json::parse(slurp(tmp.path() / "moments.json"));
    EXPECT_EQ(report["config_hash"], config_hash(j));
    const Json &n1 = report["analyses"][0];
    EXPECT_NEAR(n1["moments"]["m_a"].get<double>(), 0.8 * std::log(9.0), 1e-12);
    const Json &n200 = report["analyses"][1];
    EXPECT_NEAR(n200["locking"]["upper"].get<double>(), 0.5, 1e-6);
    EXPECT_NEAR(n200["locking"]["lower"].get<double>(), 0.5, 1e-6);
    EXPECT_LE(report["convolution"]["component_residual"].get<double>(), 1e-12);

    std::istringstream csv(slurp(tmp.path() / "z_dist_n1.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("# config_hash=", 0), 0u);
    std::getline(csv, line);
    EXPECT_EQ(line, "z,mass,branch");
    std::vector<double> mixed;
    while (std::getline(csv, line)) {
        if (line.ends_with(",mixed")) mixed.push_back(std::stod(line.substr(0, line.find(','))));
    }
    ASSERT_EQ(mixed.size(), 2u);
    EXPECT_NEAR(mixed[0], -std::log(9.0), 1e-12);
    EXPECT_NEAR(mixed[1], std::log(9.0), 1e-12);
    EXPECT_TRUE(fs::exists(tmp.path() / "z_dist.csv"));
}

TEST(cmd_analyze, single_branch_family_is_a_config_error) {
    TempDir tmp;
    std::string err;
    EXPECT_EQ(run_args({"analyze", "--preset", "paper_ordinary", "--out", tmp.path().string()}, nullptr, &err),
              kExitConfig);
    EXPECT_NE(err.find("two branches"), std::string::npos) << err;
}

TEST(cmd_list_fixtures, lists_builtins_and_presets) {
    std::string out;
    EXPECT_EQ(run_args({"list-fixtures"}, &out), kExitOk);
    for (const char *name : {"explicitR2", "bell", "paper_many_to_one"}) {
        EXPECT_NE(out.find(name), std::string::npos) << name;
    }
}

TEST(cmd_analyze, indistinguishable_branches_warn) {
    // For the default apparatus, z and e^{-2i theta} conj(z) give the same pattern.
    double theta = std::acos(0.8);
    double h = std::sqrt(0.5);
    Json j = Json::parse(minimal_with(R"(, "analysis": {"n": [5]})"));
    j["monodromy"] = Json{{"dims", {{"incoming", 1}, {"stationary", 2}}},
                          {"matrix",
                           {{"rows", 2},
                            {"cols", 2},
                            {"re", {1, 0, 0, std::cos(2 * theta)}},
                            {"im", {0, 0, 0, -std::sin(2 * theta)}}}}};
    j["initial_state"]["psi"] = Json::array({h, h});
    TempDir tmp;
    fs::path cfg = tmp.path() / "exp.json";
    std::ofstream(cfg) << j.dump();
    std::string err;
    ASSERT_EQ(run_args({"analyze", "--config", cfg.string(), "--out", tmp.path().string()}, nullptr, &err),
              kExitOk)
        << err;
    EXPECT_NE(err.find("warning"), std::string::npos);
    Json report = Json::parse(slurp(tmp.path() / "moments.json"));
    EXPECT_TRUE(report["analyses"][0]["unresolvable"].get<bool>());
    EXPECT_NEAR(report["analyses"][0]["locking"]["mid"].get<double>(), 1.0, 1e-12);
}
