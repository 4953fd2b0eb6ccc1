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

#ifndef ANYONLAB_CONVERGENCE_H
#define ANYONLAB_CONVERGENCE_H

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "anyonlab/apparatus.h"

namespace anyonlab {

inline constexpr double kDefaultZCut = 25.0;

/// Mixture of i.i.d. outcome laws: branch k is chosen with probability
/// weights[k], then every run draws from branches[k].
struct LikelihoodFamily {
    std::vector<DetectorDistribution> branches;
    std::vector<double> weights;

    /// Throws InvalidConfig unless every branch and the weights sum to one.
    void validate(double tol = 1e-12) const;
    static LikelihoodFamily two_branch(DetectorDistribution a, DetectorDistribution b, double alpha2);
};

/// sum_k w_k prod_j P_k[outcomes[j]]
double sequence_probability(const LikelihoodFamily &fam, std::span<const Detector> outcomes);

/// P(k D1 outcomes in n runs) for one branch, by dynamic programming over
/// counts so no binomial coefficient is ever formed.
std::vector<double> count_distribution(const DetectorDistribution &branch, std::size_t n);

struct ZAtom {
    double z = 0;  // may be +-infinity
    double mass = 0;
};

/// Atomic law of the log-ratio z after n runs. `mixed` carries the prior
/// offset ln(alpha^2/beta^2); `component_a`/`component_b` are the laws of the
/// likelihood part alone under each branch. Atoms are sorted by z, zero-mass
/// atoms are dropped and coincident z values are merged.
struct ZDistribution {
    std::size_t n = 0;
    std::vector<ZAtom> mixed;
    std::vector<ZAtom> component_a;
    std::vector<ZAtom> component_b;
    bool degenerate = false;  // the two branches cannot be told apart

    double total_mass() const;
};
ZDistribution z_distribution(const LikelihoodFamily &fam, std::size_t n);

struct Moments {
    double mean_a = 0;
    double var_a = 0;
    double mean_b = 0;
    double var_b = 0;
    // single-run quantities
    double m_a = 0;   // sum_i A(i) ln(A(i)/B(i))
    double s2_a = 0;  // variance of ln(A/B) under A
    double m_b = 0;   // sum_i B(i) ln(B(i)/A(i))
    double s2_b = 0;
    bool resolvable = true;
};
/// Means and variances of the component laws, computed from the atoms. Throws
/// ZeroLikelihood when an outcome is impossible under one branch only.
Moments moments(const LikelihoodFamily &fam, std::size_t n);

struct LockingMasses {
    double mid = 0;
    double upper = 0;
    double lower = 0;
};
/// Mixed-law mass in z >= z_cut, z <= -z_cut and in between.
LockingMasses locking_masses(const LikelihoodFamily &fam, std::size_t n, double z_cut = kDefaultZCut);

struct MultiAtom {
    std::size_t k = 0;                // number of D1 outcomes
    double mass = 0;
    std::vector<double> log_ratios;   // ln(branch 1 / branch j) for j = 2..K, prior included
    std::vector<double> posterior;    // per branch
};

struct MultiZDistribution {
    std::size_t n = 0;
    std::vector<MultiAtom> atoms;
    std::vector<std::size_t> group;   // branches with identical laws share a group
    std::vector<std::pair<std::size_t, std::size_t>> unresolvable;

    double total_mass() const;
    /// Mass of atoms whose group posterior is at least 1 / (1 + e^-z_cut),
    /// one entry per group, followed by the unassigned remainder.
    std::vector<double> region_masses(double z_cut = kDefaultZCut) const;
};
MultiZDistribution z_distribution_multi(const LikelihoodFamily &fam, std::size_t n);

struct ConvolutionReport {
    double component_residual = 0;  // P^A_2 against P^A_1 * P^A_1
    double mixture_residual = 0;    // P_2 against P_1 * P_1
    bool degenerate = false;
};
/// Residuals are summed absolute mass differences after matching atoms by z.
ConvolutionReport convolution_check(const LikelihoodFamily &fam);

/// Self-convolution of an atomic law, atoms merged and sorted.
std::vector<ZAtom> convolve(std::span<const ZAtom> a, std::span<const ZAtom> b);
double atom_distance(std::span<const ZAtom> a, std::span<const ZAtom> b, double tol = 1e-9);

/// Columns z, mass, branch with branch one of A, B, mixed.
void write_z_csv(std::ostream &out, const ZDistribution &dist);
/// Columns k, mass, then z_2 .. z_K, then one posterior column per branch.
void write_multi_csv(std::ostream &out, const MultiZDistribution &dist);

}  // namespace anyonlab

#endif
