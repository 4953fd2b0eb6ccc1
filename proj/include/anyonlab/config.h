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

#ifndef ANYONLAB_CONFIG_H
#define ANYONLAB_CONFIG_H

#include <string>
#include <vector>

#include "anyonlab/convergence.h"
#include "anyonlab/schemes.h"
#include "anyonlab/serialize.h"

namespace anyonlab {

inline constexpr const char *kToolVersion = "0.1.0";

/// A fully resolved experiment: scheme parameters plus output and analysis
/// settings. `source` keeps the JSON it came from for hashing.
struct ExperimentConfig {
    SchemeConfig scheme;
    std::string monodromy_name;
    std::string output_dir = "out";
    std::vector<std::string> formats{"json", "jsonl"};
    std::vector<std::size_t> analysis_n{1, 10, 100, 200};
    double z_cut = kDefaultZCut;
    Json source;
};

/// Throws InvalidConfig with the offending field on any problem.
ExperimentConfig parse_experiment(const Json &j);
/// Reads and parses a config file; JSON syntax errors report line and column.
Json read_json_file(const std::string &path);

std::vector<std::string> preset_names();
Json builtin_preset(const std::string &name);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const Json &j);

/// Two-or-more branch family implied by a scheme config: the branch laws of
/// the eigenvalues it locks onto and the initial spectral weights.
LikelihoodFamily family_for(const SchemeConfig &cfg);

Json summary_to_json(const SimulationSummary &s);
Json trial_to_json(const TrialResult &t);
Json probe_to_json(const ProbeReport &r);

}  // namespace anyonlab

#endif
