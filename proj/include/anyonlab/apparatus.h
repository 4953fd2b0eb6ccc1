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

#ifndef ANYONLAB_APPARATUS_H
#define ANYONLAB_APPARATUS_H

#include <span>
#include <vector>

#include "anyonlab/linalg.h"

namespace anyonlab {

enum class Detector { D1 = 0, D2 = 1 };

inline constexpr double kProbabilityTol = 1e-12;
inline constexpr double kBeamSplitterTol = 1e-10;

/// Lossless beam splitter. `t`/`r` are transmission/reflection for a beam
/// incident from the left, `t_prime`/`r_prime` for a beam incident from below.
struct BeamSplitter {
    Complex t;
    Complex r;
    Complex t_prime;
    Complex r_prime;

    /// Completes a splitter from its left-incidence coefficients using
    /// r' = conj(r), t' = -conj(t).
    static BeamSplitter from_left(Complex t, Complex r);

    /// Throws InvalidApparatus unless r* = r', t* = -t' and |r|^2 + |t|^2 = 1.
    void validate(double tol = kBeamSplitterTol) const;
};

/// Mach-Zehnder interferometer after integrating the phase dispersion:
/// only the dephasing magnitude `q` and mean phase difference `theta` survive.
struct Apparatus {
    BeamSplitter bs1;
    BeamSplitter bs2;
    double q = 1.0;
    double theta = 0.0;

    void validate() const;

    /// r = r' = 1/sqrt(2), t = -t' = i/sqrt(2), Q = 1, theta = arccos(4/5).
    static Apparatus paper_example();
};

struct DetectorDistribution {
    double p_d1 = 0;
    double p_d2 = 0;

    double operator[](Detector d) const noexcept {
        return d == Detector::D1 ? p_d1 : p_d2;
    }
};

/// Amplitude factors multiplying the counterclockwise (path I, braid R) and
/// clockwise (path II, braid R^-1) components that reach detector `d`. The
/// phase gauge puts the whole mean phase on path I: e^{i theta_I} = e^{i theta},
/// e^{i theta_II} = 1.
struct PathCoefficients {
    Complex ccw;
    Complex cw;
};
PathCoefficients path_coefficients(const Apparatus &app, Detector d);

/// t1 r2' conj(r1) conj(t2) e^{i theta}
Complex cross_term(const Apparatus &app);

DetectorDistribution prob_ordinary(const Apparatus &app);
/// Aharonov-Bohm distribution for topological phase `lambda_phase` (|z| = 1).
DetectorDistribution prob_ab(const Apparatus &app, Complex lambda_phase, double tol = 1e-10);
/// Non-abelian distribution for a monodromy expectation value (|z| <= 1).
/// Also gives the locked pattern P_kappa when passed an eigenvalue kappa of U.
DetectorDistribution prob_na(const Apparatus &app, Complex monodromy_expectation, double tol = 1e-10);

struct SpectralBranch {
    Complex eigenvalue;
    double weight;
    DetectorDistribution distribution;
};

/// Splits P_NA into per-eigenvalue Aharonov-Bohm patterns weighted by
/// p = <psi|E|psi>.
std::vector<SpectralBranch> decompose_na(const Apparatus &app, const SpectralDecomposition &spec,
                                         std::span<const Complex> psi);

}  // namespace anyonlab

#endif
