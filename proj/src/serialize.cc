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

#include "anyonlab/serialize.h"

#include <cmath>

#include "anyonlab/error.h"

namespace anyonlab {

namespace {

[[noreturn]] void bad(const std::string &field, const std::string &what) {
    throw Error(ErrorCode::InvalidConfig, "field '" + field + "': " + what);
}

double number(const Json &j, const std::string &field) {
    if (!j.is_number()) {
        bad(field, "expected a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        bad(field, "must be finite");
    }
    return v;
}

}  // namespace

Json complex_to_json(Complex z) {
    return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json &j, const std::string &field) {
    if (j.is_number()) {
        return {number(j, field), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        bad(field, "expected [re, im]");
    }
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

ComplexVector vector_from_json(const Json &j, const std::string &field) {
    if (!j.is_array() || j.empty()) {
        bad(field, "expected a non-empty array");
    }
    ComplexVector out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(complex_from_json(j[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
}

Json vector_to_json(std::span<const Complex> v) {
    Json out = Json::array();
    for (Complex z : v) {
        out.push_back(complex_to_json(z));
    }
    return out;
}

Json matrix_to_json(const ComplexMatrix &m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Complex z : m.entries()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json &j, const std::string &field) {
    if (!j.is_object()) {
        bad(field, "expected a matrix object");
    }
    std::size_t rows = get_uint(j, "rows", field);
    std::size_t cols = get_uint(j, "cols", field);
    const Json &re = require(j, "re", field);
    if (!re.is_array() || re.size() != rows * cols) {
        bad(field + ".re", "expected " + std::to_string(rows * cols) + " entries");
    }
    const Json *im = j.contains("im") ? &j["im"] : nullptr;
    if (im != nullptr && (!im->is_array() || im->size() != rows * cols)) {
        bad(field + ".im", "expected " + std::to_string(rows * cols) + " entries");
    }
    std::vector<Complex> entries(rows * cols);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        double x = number(re[k], field + ".re");
        double y = im != nullptr ? number((*im)[k], field + ".im") : 0.0;
        entries[k] = {x, y};
    }
    return ComplexMatrix(rows, cols, std::move(entries));
}

Json apparatus_to_json(const Apparatus &app) {
    auto bs = [](const BeamSplitter &b) {
        return Json{{"t", complex_to_json(b.t)},
                    {"r", complex_to_json(b.r)},
                    {"t_prime", complex_to_json(b.t_prime)},
                    {"r_prime", complex_to_json(b.r_prime)}};
    };
    return Json{{"bs1", bs(app.bs1)}, {"bs2", bs(app.bs2)}, {"q", app.q}, {"theta", app.theta}};
}

Apparatus apparatus_from_json(const Json &j, const std::string &field) {
    if (j.is_string()) {
        if (j.get<std::string>() == "paper_example") {
            return Apparatus::paper_example();
        }
        bad(field, "unknown apparatus preset '" + j.get<std::string>() + "'");
    }
    if (!j.is_object()) {
        bad(field, "expected an object or preset name");
    }
    auto bs = [&](const std::string &key) {
        std::string ctx = field + "." + key;
        const Json &b = require(j, key, field);
        BeamSplitter out;
        out.t = complex_from_json(require(b, "t", ctx), ctx + ".t");
        out.r = complex_from_json(require(b, "r", ctx), ctx + ".r");
        if (b.contains("t_prime") || b.contains("r_prime")) {
            out.t_prime = complex_from_json(require(b, "t_prime", ctx), ctx + ".t_prime");
            out.r_prime = complex_from_json(require(b, "r_prime", ctx), ctx + ".r_prime");
        } else {
            out = BeamSplitter::from_left(out.t, out.r);
        }
        return out;
    };
    Apparatus app;
    app.bs1 = bs("bs1");
    app.bs2 = bs("bs2");
    app.q = j.contains("q") ? number(j["q"], field + ".q") : 1.0;
    app.theta = j.contains("theta") ? number(j["theta"], field + ".theta") : 0.0;
    app.validate();
    return app;
}

Json distribution_to_json(const DetectorDistribution &d) {
    return Json::array({d.p_d1, d.p_d2});
}

Json registry_to_json(const BraidRegistry &registry) {
    Json dims = Json::object();
    for (const auto &[name, d] : registry.dims()) {
        dims[name] = d;
    }
    Json mats = Json::object();
    for (const auto &[key, braid] : registry.entries()) {
        mats[key.first + ":" + key.second] = matrix_to_json(braid.matrix);
    }
    return Json{{"dims", std::move(dims)}, {"matrices", std::move(mats)}};
}

BraidRegistry registry_from_json(const Json &j, const std::string &field) {
    BraidRegistry reg;
    const Json &dims = require(j, "dims", field);
    if (!dims.is_object()) {
        bad(field + ".dims", "expected an object");
    }
    for (const auto &[name, d] : dims.items()) {
        if (!d.is_number_unsigned()) {
            bad(field + ".dims." + name, "expected a positive integer");
        }
        reg.set_dim(name, d.get<std::size_t>());
    }
    const Json &mats = require(j, "matrices", field);
    if (!mats.is_object()) {
        bad(field + ".matrices", "expected an object");
    }
    for (const auto &[key, m] : mats.items()) {
        auto colon = key.find(':');
        if (colon == std::string::npos) {
            bad(field + ".matrices", "key '" + key + "' must look like left:right");
        }
        reg.add({key.substr(0, colon), key.substr(colon + 1), matrix_from_json(m, field + ".matrices." + key)});
    }
    return reg;
}

const Json &require(const Json &j, const std::string &key, const std::string &context) {
    if (!j.is_object() || !j.contains(key)) {
        bad(context.empty() ? key : context + "." + key, "missing");
    }
    return j[key];
}

double get_double(const Json &j, const std::string &key, const std::string &context) {
    return number(require(j, key, context), context + "." + key);
}

std::uint64_t get_uint(const Json &j, const std::string &key, const std::string &context) {
    const Json &v = require(j, key, context);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        bad(context + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const Json &j, const std::string &key, const std::string &context) {
    const Json &v = require(j, key, context);
    if (!v.is_string()) {
        bad(context + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

}  // namespace anyonlab
