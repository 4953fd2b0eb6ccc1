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

#include "anyonlab/convergence.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "anyonlab/error.h"

namespace anyonlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(a/b) with the limits a log-ratio takes on zero probabilities.
double log_ratio(double a, double b) {
    if (a == 0 && b == 0) {
        return 0;
    }
    if (b == 0) {
        return kInf;
    }
    if (a == 0) {
        return -kInf;
    }
    return std::log(a / b);
}

// count * value, with 0 * inf = 0.
double scaled(std::size_t count, double value) {
    return count == 0 ? 0.0 : static_cast<double>(count) * value;
}

double safe_log(double x) {
    return x > 0 ? std::log(x) : -kInf;
}

bool same_z(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::vector<ZAtom> merge_atoms(std::vector<ZAtom> atoms) {
    atoms.erase(std::remove_if(atoms.begin(), atoms.end(), [](const ZAtom &a) { return !(a.mass > 0); }),
                atoms.end());
    std::sort(atoms.begin(), atoms.end(), [](const ZAtom &a, const ZAtom &b) { return a.z < b.z; });
    std::vector<ZAtom> out;
    for (const ZAtom &a : atoms) {
        if (!out.empty() && same_z(out.back().z, a.z)) {
            out.back().mass += a.mass;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

bool same_law(const DetectorDistribution &a, const DetectorDistribution &b) {
    return std::abs(a.p_d1 - b.p_d1) <= 1e-12 && std::abs(a.p_d2 - b.p_d2) <= 1e-12;
}

void require_two(const LikelihoodFamily &fam) {
    fam.validate();
    if (fam.branches.size() != 2) {
        throw Error(ErrorCode::InvalidConfig, "this analysis needs exactly two branches");
    }
}

}  // namespace

void LikelihoodFamily::validate(double tol) const {
    if (branches.empty() || branches.size() != weights.size()) {
        throw Error(ErrorCode::InvalidConfig, "family needs one weight per branch");
    }
    double total = 0;
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const auto &b = branches[k];
        if (!(b.p_d1 >= 0 && b.p_d2 >= 0) || std::abs(b.p_d1 + b.p_d2 - 1) > tol) {
            throw Error(ErrorCode::InvalidConfig, "branch " + std::to_string(k) + " is not a distribution");
        }
        if (!(weights[k] >= 0)) {
            throw Error(ErrorCode::InvalidConfig, "weights must be non-negative");
        }
        total += weights[k];
    }
    if (std::abs(total - 1) > tol) {
        throw Error(ErrorCode::InvalidConfig, "weights sum to " + format_real(total));
    }
}

LikelihoodFamily LikelihoodFamily::two_branch(DetectorDistribution a, DetectorDistribution b, double alpha2) {
    return LikelihoodFamily{{a, b}, {alpha2, 1 - alpha2}};
}

double sequence_probability(const LikelihoodFamily &fam, std::span<const Detector> outcomes) {
    fam.validate();
    if (outcomes.empty()) {
        throw Error(ErrorCode::InvalidConfig, "outcome sequence is empty");
    }
    double total = 0;
    for (std::size_t k = 0; k < fam.branches.size(); ++k) {
        double p = fam.weights[k];
        for (Detector d : outcomes) {
            p *= fam.branches[k][d];
        }
        total += p;
    }
    return total;
}

std::vector<double> count_distribution(const DetectorDistribution &branch, std::size_t n) {
    std::vector<double> p(n + 1, 0.0);
    p[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        for (std::size_t k = m; k > 0; --k) {
            p[k] = p[k] * branch.p_d2 + p[k - 1] * branch.p_d1;
        }
        p[0] *= branch.p_d2;
    }
    return p;
}

double ZDistribution::total_mass() const {
    double s = 0;
    for (const auto &a : mixed) {
        s += a.mass;
    }
    return s;
}

ZDistribution z_distribution(const LikelihoodFamily &fam, std::size_t n) {
    require_two(fam);
    const auto &a = fam.branches[0];
    const auto &b = fam.branches[1];
    double alpha2 = fam.weights[0];
    double beta2 = fam.weights[1];
    double prior = log_ratio(alpha2, beta2);
    double lr1 = log_ratio(a.p_d1, b.p_d1);
    double lr2 = log_ratio(a.p_d2, b.p_d2);
    std::vector<double> pa = count_distribution(a, n);
    std::vector<double> pb = count_distribution(b, n);

    ZDistribution out;
    out.n = n;
    out.degenerate = same_law(a, b);
    std::vector<ZAtom> mixed, ca, cb;
    for (std::size_t k = 0; k <= n; ++k) {
        double ma = pa[k];
        double mb = pb[k];
        if (ma == 0 && mb == 0) {
            continue;
        }
        double z = scaled(k, lr1) + scaled(n - k, lr2);
        if (ma > 0) {
            ca.push_back({z, ma});
        }
        if (mb > 0) {
            cb.push_back({z, mb});
        }
        double mass = alpha2 * ma + beta2 * mb;
        if (mass > 0) {
            double zm = z;
            if (alpha2 == 0 || beta2 == 0) {
                zm = prior;
            } else if (!std::isinf(z)) {
                zm = z + prior;
            }
            mixed.push_back({zm, mass});
        }
    }
    out.mixed = merge_atoms(std::move(mixed));
    out.component_a = merge_atoms(std::move(ca));
    out.component_b = merge_atoms(std::move(cb));
    return out;
}

Moments moments(const LikelihoodFamily &fam, std::size_t n) {
    require_two(fam);
    const auto &a = fam.branches[0];
    const auto &b = fam.branches[1];
    Moments m;
    if (same_law(a, b)) {
        m.resolvable = false;
        return m;
    }
    double lr[2] = {log_ratio(a.p_d1, b.p_d1), log_ratio(a.p_d2, b.p_d2)};
    double pa[2] = {a.p_d1, a.p_d2};
    double pb[2] = {b.p_d1, b.p_d2};
    double ea = 0, ea2 = 0, eb = 0, eb2 = 0;
    for (int i = 0; i < 2; ++i) {
        if ((pa[i] > 0 || pb[i] > 0) && std::isinf(lr[i])) {
            throw Error(ErrorCode::ZeroLikelihood,
                        "outcome D" + std::to_string(i + 1) + " is impossible under one branch only");
        }
        ea += pa[i] * lr[i];
        ea2 += pa[i] * lr[i] * lr[i];
        eb += pb[i] * lr[i];
        eb2 += pb[i] * lr[i] * lr[i];
    }
    m.m_a = ea;
    m.s2_a = ea2 - ea * ea;
    m.m_b = -eb;
    m.s2_b = eb2 - eb * eb;

    ZDistribution d = z_distribution(fam, n);
    auto mean_var = [](const std::vector<ZAtom> &atoms, double &mean, double &var) {
        mean = 0;
        for (const auto &x : atoms) {
            mean += x.mass * x.z;
        }
        var = 0;
        for (const auto &x : atoms) {
            var += x.mass * (x.z - mean) * (x.z - mean);
        }
    };
    mean_var(d.component_a, m.mean_a, m.var_a);
    mean_var(d.component_b, m.mean_b, m.var_b);
    return m;
}

LockingMasses locking_masses(const LikelihoodFamily &fam, std::size_t n, double z_cut) {
    if (!(z_cut > 0)) {
        throw Error(ErrorCode::InvalidConfig, "z_cut must be positive");
    }
    ZDistribution d = z_distribution(fam, n);
    LockingMasses out;
    for (const auto &x : d.mixed) {
        if (x.z >= z_cut) {
            out.upper += x.mass;
        } else if (x.z <= -z_cut) {
            out.lower += x.mass;
        } else {
            out.mid += x.mass;
        }
    }
    return out;
}

double MultiZDistribution::total_mass() const {
    double s = 0;
    for (const auto &a : atoms) {
        s += a.mass;
    }
    return s;
}

std::vector<double> MultiZDistribution::region_masses(double z_cut) const {
    if (!(z_cut > 0)) {
        throw Error(ErrorCode::InvalidConfig, "z_cut must be positive");
    }
    std::size_t groups = 0;
    for (std::size_t g : group) {
        groups = std::max(groups, g + 1);
    }
    double threshold = 1 / (1 + std::exp(-z_cut));
    std::vector<double> out(groups + 1, 0.0);
    for (const auto &atom : atoms) {
        std::vector<double> gp(groups, 0.0);
        for (std::size_t j = 0; j < atom.posterior.size(); ++j) {
            gp[group[j]] += atom.posterior[j];
        }
        std::size_t hit = groups;
        for (std::size_t g = 0; g < groups; ++g) {
            if (gp[g] >= threshold) {
                hit = g;
            }
        }
        out[hit] += atom.mass;
    }
    return out;
}

MultiZDistribution z_distribution_multi(const LikelihoodFamily &fam, std::size_t n) {
    fam.validate();
    std::size_t kb = fam.branches.size();
    if (kb < 2) {
        throw Error(ErrorCode::InvalidConfig, "need at least two branches");
    }
    MultiZDistribution out;
    out.n = n;
    std::size_t next = 0;
    for (std::size_t i = 0; i < kb; ++i) {
        std::size_t g = kb;
        for (std::size_t j = 0; j < i; ++j) {
            if (same_law(fam.branches[i], fam.branches[j])) {
                out.unresolvable.emplace_back(j, i);
                if (g == kb) {
                    g = out.group[j];
                }
            }
        }
        out.group.push_back(g == kb ? next++ : g);
    }
    std::vector<std::vector<double>> counts;
    for (const auto &b : fam.branches) {
        counts.push_back(count_distribution(b, n));
    }
    for (std::size_t k = 0; k <= n; ++k) {
        MultiAtom atom;
        atom.k = k;
        std::vector<double> lj(kb);
        double top = -kInf;
        for (std::size_t j = 0; j < kb; ++j) {
            atom.mass += fam.weights[j] * counts[j][k];
            const auto &b = fam.branches[j];
            lj[j] = safe_log(fam.weights[j]) + scaled(k, safe_log(b.p_d1)) + scaled(n - k, safe_log(b.p_d2));
            top = std::max(top, lj[j]);
        }
        if (!(atom.mass > 0)) {
            continue;
        }
        double norm = 0;
        for (double l : lj) {
            norm += std::isinf(l) ? 0.0 : std::exp(l - top);
        }
        for (std::size_t j = 0; j < kb; ++j) {
            atom.posterior.push_back(std::isinf(lj[j]) ? 0.0 : std::exp(lj[j] - top) / norm);
        }
        for (std::size_t j = 1; j < kb; ++j) {
            double r = (std::isinf(lj[0]) && std::isinf(lj[j])) ? std::numeric_limits<double>::quiet_NaN()
                                                                  : lj[0] - lj[j];
            atom.log_ratios.push_back(r);
        }
        out.atoms.push_back(std::move(atom));
    }
    return out;
}

std::vector<ZAtom> convolve(std::span<const ZAtom> a, std::span<const ZAtom> b) {
    std::vector<ZAtom> out;
    for (const auto &x : a) {
        for (const auto &y : b) {
            out.push_back({x.z + y.z, x.mass * y.mass});
        }
    }
    return merge_atoms(std::move(out));
}

double atom_distance(std::span<const ZAtom> a, std::span<const ZAtom> b, double tol) {
    std::vector<bool> used(b.size(), false);
    double total = 0;
    for (const auto &x : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            bool close = std::isinf(x.z) || std::isinf(b[j].z) ? x.z == b[j].z : std::abs(x.z - b[j].z) <= tol;
            if (!used[j] && close) {
                total += std::abs(x.mass - b[j].mass);
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) {
            total += x.mass;
        }
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!used[j]) {
            total += b[j].mass;
        }
    }
    return total;
}

ConvolutionReport convolution_check(const LikelihoodFamily &fam) {
    require_two(fam);
    ZDistribution one = z_distribution(fam, 1);
    ZDistribution two = z_distribution(fam, 2);
    ConvolutionReport r;
    r.component_residual = atom_distance(two.component_a, convolve(one.component_a, one.component_a));
    r.mixture_residual = atom_distance(two.mixed, convolve(one.mixed, one.mixed));
    r.degenerate = one.degenerate || fam.weights[0] == 0 || fam.weights[1] == 0;
    return r;
}

void write_z_csv(std::ostream &out, const ZDistribution &dist) {
    out << "z,mass,branch\n" << std::setprecision(17);
    auto rows = [&](const std::vector<ZAtom> &atoms, const char *label) {
        for (const auto &a : atoms) {
            out << a.z << ',' << a.mass << ',' << label << '\n';
        }
    };
    rows(dist.mixed, "mixed");
    rows(dist.component_a, "A");
    rows(dist.component_b, "B");
}

void write_multi_csv(std::ostream &out, const MultiZDistribution &dist) {
    std::size_t kb = dist.group.size();
    out << "k,mass";
    for (std::size_t j = 2; j <= kb; ++j) {
        out << ",z_" << j;
    }
    for (std::size_t j = 1; j <= kb; ++j) {
        out << ",posterior_" << j;
    }
    out << '\n' << std::setprecision(17);
    for (const auto &a : dist.atoms) {
        out << a.k << ',' << a.mass;
        for (double r : a.log_ratios) {
            out << ',' << r;
        }
        for (double p : a.posterior) {
            out << ',' << p;
        }
        out << '\n';
    }
}

}  // namespace anyonlab
