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

#ifndef ANYONLAB_CLI_H
#define ANYONLAB_CLI_H

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anyonlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::string> out_dir;
    std::size_t threads = 1;
    std::vector<std::string> formats;  // empty: use the config's list
};

int cmd_run(const CliOptions &opts, std::ostream &out, std::ostream &err);
int cmd_analyze(const CliOptions &opts, std::ostream &out, std::ostream &err);
/// `fixture` is a fixture name or a path to a fixture JSON file.
int cmd_verify(const std::string &fixture, std::ostream &out, std::ostream &err);
int cmd_list_fixtures(std::ostream &out);

/// Parses argv and dispatches to the commands above.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace anyonlab

#endif
