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

#include "anyonlab/fixtures.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "anyonlab/error.h"

namespace anyonlab {

namespace {

Fixture from_spec(std::string name, std::string description, MonodromySpec spec) {
    Fixture f;
    f.name = std::move(name);
    f.description = std::move(description);
    f.registry = spec.registry();
    f.monodromy = std::move(spec);
    return f;
}

Fixture from_registry(std::string name, std::string description, BraidRegistry reg, const std::string &incoming,
                      const std::string &stationary) {
    Fixture f;
    f.name = std::move(name);
    f.description = std::move(description);
    f.monodromy = MonodromySpec::from_registry(reg, incoming, stationary);
    f.registry = std::move(reg);
    return f;
}

BraidRegistry single_species(std::size_t dim, ComplexMatrix braid) {
    BraidRegistry reg;
    reg.set_dim("a", dim);
    reg.add({"a", "a", std::move(braid)});
    return reg;
}

std::filesystem::path fixture_dir() {
    const char *env = std::getenv("ANYONLAB_FIXTURES");
    return env != nullptr ? std::filesystem::path(env) : std::filesystem::path();
}

}  // namespace

ComplexMatrix explicit_r2() {
    const double h = 0.5;
    const double s = std::numbers::sqrt3 / 2;
    // Blocks act on V^B for each basis vector |alpha> of V^A.
    const Complex blocks[3][2][2] = {
        {{-h, s}, {s, h}},
        {{1, 0}, {0, -1}},
        {{-h, -s}, {-s, h}},
    };
    ComplexMatrix m(6, 6);
    for (std::size_t alpha = 0; alpha < 3; ++alpha) {
        for (std::size_t b = 0; b < 2; ++b) {
            for (std::size_t bp = 0; bp < 2; ++bp) {
                m(b * 3 + alpha, bp * 3 + alpha) = blocks[alpha][b][bp];
            }
        }
    }
    return m;
}

std::vector<std::string> builtin_fixture_names() {
    return {"explicitR2", "swap", "trivial", "ab_pi", "phase", "bell", "pm1"};
}

Fixture builtin_fixture(const std::string &name) {
    if (name == "explicitR2") {
        Fixture f = from_spec(name, "6x6 monodromy with eigenvalues +1 and -1, each three-fold; principal square root",
                              MonodromySpec::from_monodromy(explicit_r2(), 2, 3));
        f.yang_baxter_max_copies = {{"A", 1}};
        return f;
    }
    if (name == "swap") {
        return from_registry(name, "pure swap on a two-dimensional species", single_species(2, pure_swap(2, 2)),
                             "a", "a");
    }
    if (name == "trivial") {
        return from_spec(name, "trivial monodromy R^2 = 1",
                         MonodromySpec::from_monodromy(ComplexMatrix::identity(1), 1, 1));
    }
    if (name == "ab_pi") {
        return from_spec(name, "abelian monodromy R^2 = -1",
                         MonodromySpec::from_monodromy(ComplexMatrix::from_rows({{-1.0}}), 1, 1));
    }
    if (name == "phase") {
        return from_registry(name, "abelian braid e^{i pi/5} times swap",
                             single_species(2, phase_swap(2, std::numbers::pi / 5)), "a", "a");
    }
    if (name == "bell") {
        return from_registry(name, "4x4 Bell braid matrix", single_species(2, bell_braid()), "a", "a");
    }
    if (name == "pm1") {
        ComplexVector diag{1.0, -1.0};
        return from_spec(name, "two-dimensional monodromy diag(+1, -1)",
                         MonodromySpec::from_monodromy(ComplexMatrix::diagonal(diag), 1, 2));
    }
    throw Error(ErrorCode::InvalidConfig, "unknown fixture '" + name + "'");
}

Fixture fixture_from_json(const Json &j, const std::string &name) {
    std::string incoming = j.value("incoming", "B");
    std::string stationary = j.value("stationary", "A");
    std::string description = j.value("description", "");
    Fixture f;
    if (j.contains("braid")) {
        BraidRegistry reg = registry_from_json(j["braid"], "braid");
        f = from_registry(name, description, std::move(reg), incoming, stationary);
    } else {
        const Json &dims = require(j, "dims", "");
        std::size_t di = get_uint(dims, incoming, "dims");
        std::size_t ds = get_uint(dims, stationary, "dims");
        MonodromySpec spec =
            MonodromySpec::from_monodromy(matrix_from_json(require(j, "monodromy", ""), "monodromy"), di, ds);
        spec.incoming = incoming;
        spec.stationary = stationary;
        f = from_spec(name, description, std::move(spec));
    }
    if (j.contains("yang_baxter_max_copies")) {
        for (const auto &[species, n] : j["yang_baxter_max_copies"].items()) {
            f.yang_baxter_max_copies[species] = n.get<std::size_t>();
        }
    }
    return f;
}

Json fixture_to_json(const Fixture &fixture) {
    const MonodromySpec &m = fixture.monodromy;
    Json out{{"description", fixture.description},
             {"incoming", m.incoming},
             {"stationary", m.stationary},
             {"braid", registry_to_json(fixture.registry)}};
    if (!fixture.yang_baxter_max_copies.empty()) {
        out["yang_baxter_max_copies"] = fixture.yang_baxter_max_copies;
    }
    return out;
}

Fixture load_fixture(const std::string &name) {
    std::filesystem::path dir = fixture_dir();
    if (!dir.empty()) {
        std::filesystem::path file = dir / (name + ".json");
        if (std::filesystem::exists(file)) {
            std::ifstream in(file);
            Json j;
            try {
                j = Json::parse(in);
            } catch (const Json::exception &e) {
                throw Error(ErrorCode::InvalidConfig, file.string() + ": " + e.what());
            }
            return fixture_from_json(j, name);
        }
    }
    return builtin_fixture(name);
}

std::vector<std::string> list_fixtures() {
    std::vector<std::string> names = builtin_fixture_names();
    std::filesystem::path dir = fixture_dir();
    if (!dir.empty() && std::filesystem::is_directory(dir)) {
        for (const auto &entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().extension() == ".json") {
                std::string stem = entry.path().stem().string();
                if (std::find(names.begin(), names.end(), stem) == names.end()) {
                    names.push_back(stem);
                }
            }
        }
    }
    return names;
}

}  // namespace anyonlab
