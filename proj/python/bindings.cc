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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "anyonlab/apparatus.h"
#include "anyonlab/cli.h"
#include "anyonlab/config.h"
#include "anyonlab/convergence.h"
#include "anyonlab/error.h"
#include "anyonlab/fixtures.h"
#include "anyonlab/schemes.h"

namespace py = pybind11;
using namespace anyonlab;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const ComplexArray &a) {
    if (a.ndim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "expected a 2-d array");
    }
    ComplexMatrix m(a.shape(0), a.shape(1));
    auto v = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) {
        for (py::ssize_t j = 0; j < a.shape(1); ++j) {
            m(i, j) = v(i, j);
        }
    }
    return m;
}

ComplexArray to_array(const ComplexMatrix &m) {
    ComplexArray a({m.rows(), m.cols()});
    std::copy(m.entries().begin(), m.entries().end(), a.mutable_data());
    return a;
}

py::tuple pair(const DetectorDistribution &d) {
    return py::make_tuple(d.p_d1, d.p_d2);
}

DetectorDistribution branch(std::pair<double, double> p) {
    return {p.first, p.second};
}

py::list atoms(const std::vector<ZAtom> &v) {
    py::list out;
    for (const ZAtom &a : v) {
        out.append(py::make_tuple(a.z, a.mass));
    }
    return out;
}

std::string simulate_json(const std::string &config, std::size_t threads) {
    Json source = Json::parse(config);
    ExperimentConfig exp = parse_experiment(source);
    SimulationSummary s = summarize(exp.scheme, run_trials(exp.scheme, threads));
    Json j = summary_to_json(s);
    j["config_hash"] = config_hash(source);
    j["version"] = kToolVersion;
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interferometry of non-abelian anyons: closed forms, repeated-run simulation and locking analysis.";
    m.attr("__version__") = kToolVersion;
    py::register_exception<Error>(m, "AnyonLabError", PyExc_ValueError);

    py::class_<Apparatus>(m, "Apparatus")
        .def(py::init([](Complex t1, Complex r1, Complex t2, Complex r2, double q, double theta) {
                 Apparatus a{BeamSplitter::from_left(t1, r1), BeamSplitter::from_left(t2, r2), q, theta};
                 a.validate();
                 return a;
             }),
             py::arg("t1"), py::arg("r1"), py::arg("t2"), py::arg("r2"), py::arg("q") = 1.0, py::arg("theta") = 0.0)
        .def_static("paper_example", &Apparatus::paper_example)
        .def_readonly("q", &Apparatus::q)
        .def_readonly("theta", &Apparatus::theta)
        .def("prob_ordinary", [](const Apparatus &a) { return pair(prob_ordinary(a)); })
        .def("prob_ab", [](const Apparatus &a, Complex phase) { return pair(prob_ab(a, phase)); },
             py::arg("phase"))
        .def("prob_na", [](const Apparatus &a, Complex expectation) { return pair(prob_na(a, expectation)); },
             py::arg("expectation"));

    m.def("list_fixtures", &list_fixtures);
    m.def(
        "fixture_monodromy", [](const std::string &name) { return to_array(load_fixture(name).monodromy.monodromy); },
        py::arg("name"));
    m.def(
        "fixture_eigenvalues",
        [](const std::string &name) { return load_fixture(name).monodromy.spectrum.eigenvalues; }, py::arg("name"));
    m.def(
        "compute_u",
        [](const ComplexArray &monodromy, const ComplexArray &rho_b, std::size_t dim_b, std::size_t dim_a) {
            UOperator u = compute_U(to_matrix(monodromy), to_matrix(rho_b), dim_b, dim_a);
            return py::make_tuple(to_array(u.u), u.spectrum.eigenvalues);
        },
        py::arg("monodromy"), py::arg("rho_b"), py::arg("dim_b"), py::arg("dim_a"));

    m.def("preset_names", &preset_names);
    m.def(
        "preset_json", [](const std::string &name) { return builtin_preset(name).dump(); }, py::arg("name"));
    m.def(
        "config_hash_json", [](const std::string &text) { return config_hash(Json::parse(text)); },
        py::arg("text"));
    m.def("simulate_json", &simulate_json, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "z_distribution",
        [](std::pair<double, double> a, std::pair<double, double> b, double alpha2, std::size_t n) {
            ZDistribution d = z_distribution(LikelihoodFamily::two_branch(branch(a), branch(b), alpha2), n);
            py::dict out;
            out["mixed"] = atoms(d.mixed);
            out["component_a"] = atoms(d.component_a);
            out["component_b"] = atoms(d.component_b);
            out["degenerate"] = d.degenerate;
            return out;
        },
        py::arg("branch_a"), py::arg("branch_b"), py::arg("alpha2"), py::arg("n"));
    m.def(
        "moments",
        [](std::pair<double, double> a, std::pair<double, double> b, double alpha2, std::size_t n) {
            Moments mo = moments(LikelihoodFamily::two_branch(branch(a), branch(b), alpha2), n);
            py::dict out;
            out["mean_a"] = mo.mean_a;
            out["var_a"] = mo.var_a;
            out["mean_b"] = mo.mean_b;
            out["var_b"] = mo.var_b;
            out["m_a"] = mo.m_a;
            out["s2_a"] = mo.s2_a;
            out["m_b"] = mo.m_b;
            out["s2_b"] = mo.s2_b;
            out["resolvable"] = mo.resolvable;
            return out;
        },
        py::arg("branch_a"), py::arg("branch_b"), py::arg("alpha2"), py::arg("n"));
    m.def(
        "locking_masses",
        [](std::pair<double, double> a, std::pair<double, double> b, double alpha2, std::size_t n, double z_cut) {
            LockingMasses lm =
                locking_masses(LikelihoodFamily::two_branch(branch(a), branch(b), alpha2), n, z_cut);
            return py::make_tuple(lm.upper, lm.lower, lm.mid);
        },
        py::arg("branch_a"), py::arg("branch_b"), py::arg("alpha2"), py::arg("n"), py::arg("z_cut") = kDefaultZCut);

    m.def(
        "verify",
        [](const std::string &fixture) {
            std::ostringstream out, err;
            int code = cmd_verify(fixture, out, err);
            return py::make_tuple(code, out.str() + err.str());
        },
        py::arg("fixture"));
}
