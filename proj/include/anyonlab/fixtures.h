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

#ifndef ANYONLAB_FIXTURES_H
#define ANYONLAB_FIXTURES_H

#include <map>
#include <string>
#include <vector>

#include "anyonlab/braid.h"
#include "anyonlab/serialize.h"

namespace anyonlab {

/// A named braid setup: the two-particle monodromy used by the
/// interferometer plus a registry sufficient for multi-particle words.
struct Fixture {
    std::string name;
    std::string description;
    MonodromySpec monodromy;
    BraidRegistry registry;
    /// Species copy limits for the Yang-Baxter sweep (see check_yang_baxter).
    std::map<std::string, std::size_t> yang_baxter_max_copies;
};

/// The 6x6 monodromy with V^B = span{|+>, |->} and V^A = span{|1>, |2>, |3>},
/// in the V^B (x) V^A product basis (B index slowest).
ComplexMatrix explicit_r2();

std::vector<std::string> builtin_fixture_names();
Fixture builtin_fixture(const std::string &name);

/// Builds a fixture from its JSON description. Either "monodromy" (a matrix
/// on V^incoming (x) V^stationary) or "braid" (a registry object) is required.
Fixture fixture_from_json(const Json &j, const std::string &name);
Json fixture_to_json(const Fixture &fixture);

/// Looks for `<name>.json` in $ANYONLAB_FIXTURES first, then the builtins.
Fixture load_fixture(const std::string &name);
std::vector<std::string> list_fixtures();

}  // namespace anyonlab

#endif
