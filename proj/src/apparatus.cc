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

#include "anyonlab/apparatus.h"

#include <cmath>
#include <string>

#include "anyonlab/error.h"

namespace anyonlab {

namespace {

double clamp_probability(double p, const char *what) {
    if (p < -kProbabilityTol || p > 1 + kProbabilityTol || !std::isfinite(p)) {
        throw Error(ErrorCode::InvalidApparatus,
                    std::string(what) + " = " + format_real(p) + " lies outside [0, 1]");
    }
    return std::min(1.0, std::max(0.0, p));
}

// Shared by every distribution: the ordinary one is z = 1, Aharonov-Bohm is a
// unit phase and the non-abelian one is the monodromy expectation value.
DetectorDistribution distribution_for(const Apparatus &app, Complex z) {
    const auto &b1 = app.bs1;
    const auto &b2 = app.bs2;
    double direct = std::norm(b1.t * b2.r_prime) + std::norm(b1.r * b2.t);
    double p1 = direct + 2 * app.q * (cross_term(app) * z).real();
    DetectorDistribution out;
    out.p_d1 = clamp_probability(p1, "P[D1]");
    out.p_d2 = clamp_probability(1 - p1, "P[D2]");
    return out;
}

}  // namespace

BeamSplitter BeamSplitter::from_left(Complex t, Complex r) {
    return BeamSplitter{t, r, -std::conj(t), std::conj(r)};
}

void BeamSplitter::validate(double tol) const {
    if (std::abs(std::conj(r) - r_prime) > tol) {
        throw Error(ErrorCode::InvalidApparatus, "beam splitter violates conj(r) = r'");
    }
    if (std::abs(std::conj(t) + t_prime) > tol) {
        throw Error(ErrorCode::InvalidApparatus, "beam splitter violates conj(t) = -t'");
    }
    double total = std::norm(r) + std::norm(t);
    if (std::abs(total - 1) > tol) {
        throw Error(ErrorCode::InvalidApparatus,
                    "beam splitter violates |r|^2 + |t|^2 = 1 (got " + format_real(total) + ")");
    }
}

void Apparatus::validate() const {
    bs1.validate();
    bs2.validate();
    if (!(q >= 0 && q <= 1)) {
        throw Error(ErrorCode::InvalidApparatus, "dephasing factor Q must lie in [0, 1]");
    }
    if (!std::isfinite(theta)) {
        throw Error(ErrorCode::InvalidApparatus, "theta must be finite");
    }
}

Apparatus Apparatus::paper_example() {
    const double h = 1 / std::sqrt(2.0);
    BeamSplitter bs = BeamSplitter::from_left(Complex(0, h), Complex(h, 0));
    return Apparatus{bs, bs, 1.0, std::acos(0.8)};
}

PathCoefficients path_coefficients(const Apparatus &app, Detector d) {
    Complex phase = std::polar(1.0, app.theta);
    if (d == Detector::D1) {
        return {app.bs1.t * app.bs2.r_prime * phase, app.bs1.r * app.bs2.t};
    }
    return {app.bs1.t * app.bs2.t_prime * phase, app.bs1.r * app.bs2.r};
}

Complex cross_term(const Apparatus &app) {
    return app.bs1.t * app.bs2.r_prime * std::conj(app.bs1.r) * std::conj(app.bs2.t) * std::polar(1.0, app.theta);
}

DetectorDistribution prob_ordinary(const Apparatus &app) {
    return distribution_for(app, Complex(1, 0));
}

DetectorDistribution prob_ab(const Apparatus &app, Complex lambda_phase, double tol) {
    if (std::abs(std::abs(lambda_phase) - 1) > tol) {
        throw Error(ErrorCode::NotUnitModulus,
                    "topological phase has modulus " + format_real(std::abs(lambda_phase)));
    }
    return distribution_for(app, lambda_phase);
}

DetectorDistribution prob_na(const Apparatus &app, Complex monodromy_expectation, double tol) {
    if (std::abs(monodromy_expectation) > 1 + tol) {
        throw Error(ErrorCode::ExpectationOutOfDisk,
                    "monodromy expectation has modulus " + format_real(std::abs(monodromy_expectation)));
    }
    return distribution_for(app, monodromy_expectation);
}

std::vector<SpectralBranch> decompose_na(const Apparatus &app, const SpectralDecomposition &spec,
                                         std::span<const Complex> psi) {
    if (psi.size() != spec.source_dim) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension " + std::to_string(psi.size()) +
                                                      " does not match operator dimension " +
                                                      std::to_string(spec.source_dim));
    }
    std::vector<double> weights = spec.weights(psi);
    std::vector<SpectralBranch> out;
    out.reserve(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        // Eigenvalues of a unitary lie on the circle; eigenvalues of U (normal,
        // not unitary) only inside the disk, so use the general formula.
        out.push_back({spec.eigenvalues[k], weights[k], prob_na(app, spec.eigenvalues[k])});
    }
    return out;
}

}  // namespace anyonlab
