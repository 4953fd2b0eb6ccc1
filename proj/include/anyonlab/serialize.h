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

#ifndef ANYONLAB_SERIALIZE_H
#define ANYONLAB_SERIALIZE_H

#include <json.hpp>

#include "anyonlab/apparatus.h"
#include "anyonlab/braid.h"
#include "anyonlab/linalg.h"

namespace anyonlab {

using Json = nlohmann::json;

/// [re, im]
Json complex_to_json(Complex z);
Complex complex_from_json(const Json &j, const std::string &field);

/// Either an array of complex pairs or an array of plain reals.
ComplexVector vector_from_json(const Json &j, const std::string &field);
Json vector_to_json(std::span<const Complex> v);

/// {"rows": n, "cols": m, "re": [...], "im": [...]}, row-major.
Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j, const std::string &field);

Json apparatus_to_json(const Apparatus &app);
/// Accepts the full object or the preset name "paper_example".
Apparatus apparatus_from_json(const Json &j, const std::string &field = "apparatus");

Json distribution_to_json(const DetectorDistribution &d);

/// {"dims": {...}, "matrices": {"X:Y": matrix, ...}}
Json registry_to_json(const BraidRegistry &registry);
BraidRegistry registry_from_json(const Json &j, const std::string &field);

/// Typed accessors that raise InvalidConfig naming the offending field.
const Json &require(const Json &j, const std::string &key, const std::string &context);
double get_double(const Json &j, const std::string &key, const std::string &context);
std::uint64_t get_uint(const Json &j, const std::string &key, const std::string &context);
std::string get_string(const Json &j, const std::string &key, const std::string &context);

}  // namespace anyonlab

#endif
