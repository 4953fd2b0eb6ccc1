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

#include "anyonlab/schemes.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "anyonlab/error.h"

namespace anyonlab {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ManyToMany:
            return "many_to_many";
        case Scheme::OneToOne:
            return "one_to_one";
        case Scheme::ManyToOne:
            return "many_to_one";
        case Scheme::ConjectureProbe:
            return "many_to_one_conjecture_probe";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string &name) {
    for (Scheme s : {Scheme::ManyToMany, Scheme::OneToOne, Scheme::ManyToOne, Scheme::ConjectureProbe}) {
        if (scheme_name(s) == name) {
            return s;
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unknown scheme '" + name + "'");
}

std::string engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::Spectral:
            return "spectral";
        case EngineKind::Oracle:
            return "oracle";
        case EngineKind::Both:
            return "both";
    }
    return "unknown";
}

EngineKind parse_engine(const std::string &name) {
    for (EngineKind e : {EngineKind::Spectral, EngineKind::Oracle, EngineKind::Both}) {
        if (engine_name(e) == name) {
            return e;
        }
    }
    throw Error(ErrorCode::InvalidConfig, "unknown engine '" + name + "'");
}

BranchSet BranchSet::build(const Apparatus &app, std::span<const Complex> eigenvalues, double tol) {
    BranchSet out;
    out.eigenvalues.assign(eigenvalues.begin(), eigenvalues.end());
    for (Complex z : eigenvalues) {
        out.patterns.push_back(prob_na(app, z));
    }
    std::size_t next_group = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t g = std::numeric_limits<std::size_t>::max();
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(out.patterns[i].p_d1 - out.patterns[j].p_d1) <= tol) {
                out.unresolvable.emplace_back(j, i);
                if (g == std::numeric_limits<std::size_t>::max()) {
                    g = out.group[j];
                }
            }
        }
        out.group.push_back(g == std::numeric_limits<std::size_t>::max() ? next_group++ : g);
    }
    return out;
}

std::size_t BranchSet::group_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t g : group) {
        n = std::max(n, g + 1);
    }
    return n;
}

DetectorDistribution run_probabilities(const Apparatus &app, std::span<const Complex> psi,
                                       const ComplexMatrix &monodromy) {
    if (psi.size() != monodromy.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension " + std::to_string(psi.size()) +
                                                      " does not match monodromy dimension " +
                                                      std::to_string(monodromy.cols()));
    }
    return prob_na(app, expectation(monodromy, psi));
}

namespace {

Projection normalize_component(ComplexVector v, const char *what) {
    double k = 0;
    for (Complex z : v) {
        k += std::norm(z);
    }
    if (k < kZeroNormTol) {
        throw Error(ErrorCode::ZeroNormComponent, std::string(what) + " has zero probability");
    }
    double s = 1 / std::sqrt(k);
    for (Complex &z : v) {
        z *= s;
    }
    return {std::move(v), k};
}

void require_dim(std::size_t got, std::size_t want, const char *what) {
    if (got != want) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " + std::to_string(got) +
                                                      ", expected " + std::to_string(want));
    }
}

void require_coherent(const Apparatus &app, const char *engine) {
    if (std::abs(app.q - 1) > 1e-15) {
        throw Error(ErrorCode::InvalidConfig,
                    std::string(engine) + " evolves a pure state and needs Q = 1; use the density engine");
    }
}

ComplexMatrix normalized_density(ComplexMatrix rho, double p, const char *what) {
    if (!(p >= kZeroNormTol)) {
        throw Error(ErrorCode::ZeroNormComponent, std::string(what) + " has zero probability");
    }
    rho *= Complex(1 / p, 0);
    return rho;
}

}  // namespace

Projection project_after_detection(const Apparatus &app, const MonodromySpec &spec, std::span<const Complex> psi,
                                   Detector outcome) {
    require_dim(psi.size(), spec.dim(), "state");
    PathCoefficients pc = path_coefficients(app, outcome);
    ComplexVector a = spec.ccw * psi;
    ComplexVector b = spec.cw * psi;
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] = pc.ccw * a[k] + pc.cw * b[k];
    }
    return normalize_component(std::move(a), "detector component");
}

Projection step_one_to_one(const Apparatus &app, const MonodromySpec &spec, std::span<const Complex> psi,
                           Detector outcome) {
    Projection p = project_after_detection(app, spec, psi, outcome);
    p.state = spec.ret * p.state;
    return p;
}

DensityStep step_one_to_one_density(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho,
                                    Detector outcome) {
    require_dim(rho.rows(), spec.dim(), "density matrix");
    PathCoefficients pc = path_coefficients(app, outcome);
    const ComplexMatrix &r2 = spec.monodromy;
    ComplexMatrix r2_rho = r2 * rho;
    ComplexMatrix out = std::norm(pc.ccw) * (r2_rho * r2.adjoint());
    out += std::norm(pc.cw) * rho;
    ComplexMatrix cross = (app.q * pc.ccw * std::conj(pc.cw)) * r2_rho;
    out += cross;
    out += cross.adjoint();
    double p = out.trace().real();
    return {normalized_density(std::move(out), p, "detector component"), p};
}

DensityStep step_many_to_one(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho_a,
                             const ComplexMatrix &rho_b, Detector outcome) {
    require_dim(rho_a.rows(), spec.dim_stationary, "rho_A");
    require_dim(rho_b.rows(), spec.dim_incoming, "rho_B");
    PathCoefficients pc = path_coefficients(app, outcome);
    ComplexMatrix x = kron(rho_b, rho_a);
    ComplexMatrix rx = spec.ccw * x;
    ComplexMatrix sx = spec.cw * x;
    ComplexMatrix joint = std::norm(pc.ccw) * (rx * spec.ccw.adjoint());
    joint += std::norm(pc.cw) * (sx * spec.cw.adjoint());
    ComplexMatrix cross = (app.q * pc.ccw * std::conj(pc.cw)) * (rx * spec.cw.adjoint());
    joint += cross;
    joint += cross.adjoint();
    double p = joint.trace().real();
    ComplexMatrix reduced = partial_trace_right(joint, spec.dim_stationary, spec.dim_incoming);
    return {normalized_density(std::move(reduced), p, "detector component"), p};
}

UOperator compute_U(const ComplexMatrix &monodromy, const ComplexMatrix &rho_b, std::size_t dim_b, std::size_t dim_a,
                    const SpectralOptions &options) {
    UOperator out;
    out.u = partial_trace_left(monodromy, dim_b, dim_a, rho_b);
    out.spectrum = spectral_decompose(out.u, options);
    for (Complex k : out.spectrum.eigenvalues) {
        if (std::abs(k) > 1 + options.normality_tol) {
            throw Error(ErrorCode::ExpectationOutOfDisk, "eigenvalue of U has modulus " + format_real(std::abs(k)));
        }
    }
    return out;
}

double many_to_one_spectral_residual(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho_b,
                                     const UOperator &u) {
    const ComplexMatrix &r = spec.ccw;
    const ComplexMatrix &s = spec.cw;
    ComplexMatrix id_b = ComplexMatrix::identity(spec.dim_incoming);
    double worst = 0;
    for (Detector d : {Detector::D1, Detector::D2}) {
        PathCoefficients pc = path_coefficients(app, d);
        for (std::size_t k = 0; k < u.spectrum.size(); ++k) {
            ComplexMatrix x = kron(u.spectrum.projectors[k], id_b);
            ComplexMatrix xr = x * r;
            ComplexMatrix xs = x * s;
            ComplexMatrix y = std::norm(pc.ccw) * (r.adjoint() * xr);
            y += std::norm(pc.cw) * (s.adjoint() * xs);
            ComplexMatrix cross = (app.q * pc.ccw * std::conj(pc.cw)) * (s.adjoint() * xr);
            y += cross;
            y += cross.adjoint();
            ComplexMatrix dual = partial_trace_left(y, spec.dim_incoming, spec.dim_stationary, rho_b);
            double pk = prob_na(app, u.spectrum.eigenvalues[k])[d];
            worst = std::max(worst, max_abs_diff(dual, pk * u.spectrum.projectors[k]));
        }
    }
    return worst;
}

ComplexVector state_with_weights(const SpectralDecomposition &spectrum,
                                 std::span<const std::pair<Complex, double>> weights, double tol) {
    std::size_t n = spectrum.source_dim;
    ComplexVector out(n);
    double total = 0;
    for (const auto &[value, w] : weights) {
        if (!(w >= 0)) {
            throw Error(ErrorCode::InvalidConfig, "spectral weights must be non-negative");
        }
        std::size_t k = spectrum.find(value, tol);
        if (k == spectrum.size()) {
            throw Error(ErrorCode::InvalidConfig, "no eigenvalue near (" + format_real(value.real()) + ", " +
                                                      format_real(value.imag()) + ")");
        }
        total += w;
        const ComplexMatrix &e = spectrum.projectors[k];
        std::size_t best = 0;
        double best_norm = -1;
        for (std::size_t j = 0; j < n; ++j) {
            double c = 0;
            for (std::size_t i = 0; i < n; ++i) {
                c += std::norm(e(i, j));
            }
            if (c > best_norm) {
                best_norm = c;
                best = j;
            }
        }
        double s = std::sqrt(w / best_norm);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += s * e(i, best);
        }
    }
    if (std::abs(total - 1) > 1e-9) {
        throw Error(ErrorCode::InvalidConfig, "spectral weights sum to " + format_real(total) + ", not 1");
    }
    return normalized(out);
}

// ---- engines -----------------------------------------------------------------

SpectralEngine::SpectralEngine(BranchSet branches, std::vector<double> weights)
    : branches_(std::move(branches)), weights_(std::move(weights)) {
    require_dim(weights_.size(), branches_.size(), "weight vector");
}

DetectorDistribution SpectralEngine::probabilities() const {
    DetectorDistribution d;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        d.p_d1 += weights_[k] * branches_.patterns[k].p_d1;
        d.p_d2 += weights_[k] * branches_.patterns[k].p_d2;
    }
    return d;
}

void SpectralEngine::update(Detector outcome) {
    double total = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        weights_[k] *= branches_.patterns[k][outcome];
        total += weights_[k];
    }
    if (total < kZeroNormTol) {
        throw Error(ErrorCode::ZeroNormComponent, "outcome has zero probability under every branch");
    }
    for (double &w : weights_) {
        w /= total;
    }
}

Complex SpectralEngine::expectation() const {
    Complex z = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        z += weights_[k] * branches_.eigenvalues[k];
    }
    return z;
}

OneToOneStateEngine::OneToOneStateEngine(const Apparatus &app, const MonodromySpec &spec, ComplexVector psi)
    : app_(app), spec_(spec), psi_(std::move(psi)) {
    require_coherent(app_, "the one-to-one state engine");
    require_dim(psi_.size(), spec_.dim(), "state");
}

DetectorDistribution OneToOneStateEngine::probabilities() const {
    return run_probabilities(app_, psi_, spec_.monodromy);
}

void OneToOneStateEngine::update(Detector outcome) {
    psi_ = step_one_to_one(app_, spec_, psi_, outcome).state;
}

std::vector<double> OneToOneStateEngine::weights() const {
    return spec_.spectrum.weights(psi_);
}

Complex OneToOneStateEngine::expectation() const {
    return anyonlab::expectation(spec_.monodromy, psi_);
}

OneToOneDensityEngine::OneToOneDensityEngine(const Apparatus &app, const MonodromySpec &spec, ComplexMatrix rho)
    : app_(app), spec_(spec), rho_(std::move(rho)) {
    require_dim(rho_.rows(), spec_.dim(), "density matrix");
}

DetectorDistribution OneToOneDensityEngine::probabilities() const {
    return prob_na(app_, expectation());
}

void OneToOneDensityEngine::update(Detector outcome) {
    rho_ = step_one_to_one_density(app_, spec_, rho_, outcome).rho;
}

std::vector<double> OneToOneDensityEngine::weights() const {
    return spec_.spectrum.weights(rho_);
}

Complex OneToOneDensityEngine::expectation() const {
    return anyonlab::expectation(spec_.monodromy, rho_);
}

ManyToOneReducedEngine::ManyToOneReducedEngine(const Apparatus &app, const MonodromySpec &spec, ComplexMatrix rho_b,
                                               UOperator u, ComplexMatrix rho_a)
    : app_(app), spec_(spec), rho_b_(std::move(rho_b)), u_(std::move(u)), rho_a_(std::move(rho_a)) {
    require_dim(rho_a_.rows(), spec_.dim_stationary, "rho_A");
}

DetectorDistribution ManyToOneReducedEngine::probabilities() const {
    if (cache_.empty()) {
        for (Detector d : {Detector::D1, Detector::D2}) {
            try {
                cache_.push_back(step_many_to_one(app_, spec_, rho_a_, rho_b_, d));
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroNormComponent) {
                    throw;
                }
                cache_.push_back({ComplexMatrix(), 0.0});
            }
        }
    }
    return {cache_[0].probability, cache_[1].probability};
}

void ManyToOneReducedEngine::update(Detector outcome) {
    probabilities();
    DensityStep step = std::move(cache_[static_cast<int>(outcome)]);
    cache_.clear();
    if (step.probability < kZeroNormTol) {
        throw Error(ErrorCode::ZeroNormComponent, "detector component has zero probability");
    }
    rho_a_ = std::move(step.rho);
}

std::vector<double> ManyToOneReducedEngine::weights() const {
    return u_.spectrum.weights(rho_a_);
}

Complex ManyToOneReducedEngine::expectation() const {
    return anyonlab::expectation(u_.u, rho_a_);
}

FullStateManyToOne::FullStateManyToOne(const Apparatus &app, const MonodromySpec &spec, ComplexVector psi_b,
                                       ComplexVector joint, std::size_t env_dim, std::size_t dimension_cap)
    : app_(app), spec_(spec), psi_b_(std::move(psi_b)), state_(std::move(joint)), rest_dim_(env_dim),
      cap_(dimension_cap) {
    require_coherent(app_, "the full-state many-to-one engine");
    require_dim(psi_b_.size(), spec_.dim_incoming, "psi_B");
    require_dim(state_.size(), spec_.dim_stationary * env_dim, "joint A state");
    u_ = compute_U(spec_.monodromy, ComplexMatrix::outer(psi_b_, psi_b_), spec_.dim_incoming, spec_.dim_stationary);
}

Projection FullStateManyToOne::project(Detector outcome) const {
    std::size_t da = spec_.dim_stationary;
    std::size_t db = spec_.dim_incoming;
    std::size_t rest = rest_dim_;
    std::size_t pair = da * db;
    if (state_.size() > cap_ / db) {
        throw Error(ErrorCode::SizeOverflow, "full many-to-one state would exceed dimension cap " +
                                                 std::to_string(cap_));
    }
    PathCoefficients pc = path_coefficients(app_, outcome);
    ComplexMatrix m = pc.ccw * spec_.ccw + pc.cw * spec_.cw;
    ComplexVector out(state_.size() * db);
    ComplexVector x(pair);
    for (std::size_t r = 0; r < rest; ++r) {
        for (std::size_t b = 0; b < db; ++b) {
            for (std::size_t a = 0; a < da; ++a) {
                x[b * da + a] = psi_b_[b] * state_[a * rest + r];
            }
        }
        for (std::size_t row = 0; row < pair; ++row) {
            Complex acc = 0;
            for (std::size_t k = 0; k < pair; ++k) {
                acc += m(row, k) * x[k];
            }
            // row = a' * db + b' on V^A (x) V^B; the new B joins the rest.
            out[row * rest + r] = acc;
        }
    }
    try {
        return normalize_component(std::move(out), "detector component");
    } catch (const Error &e) {
        if (e.code() != ErrorCode::ZeroNormComponent) {
            throw;
        }
        return {{}, 0.0};
    }
}

DetectorDistribution FullStateManyToOne::probabilities() const {
    if (cache_.empty()) {
        cache_.push_back(project(Detector::D1));
        cache_.push_back(project(Detector::D2));
    }
    return {cache_[0].k, cache_[1].k};
}

void FullStateManyToOne::update(Detector outcome) {
    probabilities();
    Projection p = std::move(cache_[static_cast<int>(outcome)]);
    cache_.clear();
    if (p.k < kZeroNormTol) {
        throw Error(ErrorCode::ZeroNormComponent, "detector component has zero probability");
    }
    state_ = std::move(p.state);
    rest_dim_ *= spec_.dim_incoming;
    ++b_count_;
}

ComplexMatrix FullStateManyToOne::reduced_a() const {
    std::size_t da = spec_.dim_stationary;
    ComplexMatrix rho(da, da);
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < da; ++b) {
            Complex acc = 0;
            for (std::size_t r = 0; r < rest_dim_; ++r) {
                acc += state_[a * rest_dim_ + r] * std::conj(state_[b * rest_dim_ + r]);
            }
            rho(a, b) = acc;
        }
    }
    return rho;
}

std::vector<double> FullStateManyToOne::weights() const {
    return u_.spectrum.weights(reduced_a());
}

Complex FullStateManyToOne::expectation() const {
    return anyonlab::expectation(u_.u, reduced_a());
}

// ---- configuration -----------------------------------------------------------

namespace {

[[noreturn]] void bad_config(const std::string &field, const std::string &what) {
    throw Error(ErrorCode::InvalidConfig, "field '" + field + "': " + what);
}

void check_unit(std::span<const Complex> v, std::size_t dim, const char *field) {
    if (v.size() != dim) {
        bad_config(field, "expected dimension " + std::to_string(dim) + ", got " + std::to_string(v.size()));
    }
    if (std::abs(norm(v) - 1) > 1e-8) {
        bad_config(field, "state is not normalized");
    }
}

ComplexMatrix trace_env(std::span<const Complex> joint, std::size_t da, std::size_t env) {
    ComplexMatrix rho(da, da);
    for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < da; ++b) {
            Complex acc = 0;
            for (std::size_t r = 0; r < env; ++r) {
                acc += joint[a * env + r] * std::conj(joint[b * env + r]);
            }
            rho(a, b) = acc;
        }
    }
    return rho;
}

}  // namespace

void SchemeConfig::validate() const {
    apparatus.validate();
    if (runs < 1) {
        bad_config("runs", "must be at least 1");
    }
    if (trials < 1) {
        bad_config("trials", "must be at least 1");
    }
    if (!(lock_threshold > 0.5 && lock_threshold < 1)) {
        bad_config("lock_threshold", "must lie in (0.5, 1)");
    }
    if (monodromy.dim() == 0 || monodromy.monodromy.rows() != monodromy.dim()) {
        bad_config("monodromy", "missing or inconsistent");
    }
    switch (scheme) {
        case Scheme::ManyToMany:
        case Scheme::OneToOne:
            check_unit(psi, monodromy.dim(), "initial_state.psi");
            break;
        case Scheme::ManyToOne:
            check_unit(psi_b, monodromy.dim_incoming, "initial_state.psi_b");
            if (!rho_a) {
                bad_config("initial_state.rho_a", "missing");
            }
            if (rho_a->rows() != monodromy.dim_stationary) {
                bad_config("initial_state.rho_a", "expected dimension " + std::to_string(monodromy.dim_stationary));
            }
            DensityMatrix(*rho_a, 1e-8);
            break;
        case Scheme::ConjectureProbe:
            check_unit(psi_b, monodromy.dim_incoming, "initial_state.psi_b");
            if (env_dim < 1) {
                bad_config("initial_state.env_dim", "must be at least 1");
            }
            check_unit(joint, monodromy.dim_stationary * env_dim, "initial_state.joint");
            if (!(stabilization_tol > 0)) {
                bad_config("stabilization_tol", "must be positive");
            }
            break;
    }
}

ComplexMatrix SchemeConfig::rho_b() const {
    return ComplexMatrix::outer(psi_b, psi_b);
}

ComplexMatrix SchemeConfig::initial_rho_a() const {
    if (scheme == Scheme::ConjectureProbe) {
        return trace_env(joint, monodromy.dim_stationary, env_dim);
    }
    if (!rho_a) {
        throw Error(ErrorCode::InvalidConfig, "field 'initial_state.rho_a': missing");
    }
    return *rho_a;
}

Complex SchemeConfig::expected_average() const {
    if (scheme == Scheme::ManyToMany || scheme == Scheme::OneToOne) {
        return expectation(monodromy.monodromy, psi);
    }
    UOperator u = compute_U(monodromy.monodromy, rho_b(), monodromy.dim_incoming, monodromy.dim_stationary);
    return expectation(u.u, initial_rho_a());
}

BranchSet scheme_branches(const SchemeConfig &cfg) {
    if (cfg.scheme == Scheme::ManyToMany || cfg.scheme == Scheme::OneToOne) {
        return BranchSet::build(cfg.apparatus, cfg.monodromy.spectrum.eigenvalues);
    }
    UOperator u =
        compute_U(cfg.monodromy.monodromy, cfg.rho_b(), cfg.monodromy.dim_incoming, cfg.monodromy.dim_stationary);
    return BranchSet::build(cfg.apparatus, u.spectrum.eigenvalues);
}

// ---- simulation --------------------------------------------------------------

namespace {

std::vector<double> group_weights(const BranchSet &branches, const std::vector<double> &w) {
    std::vector<double> g(branches.group_count(), 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) {
        g[branches.group[k]] += w[k];
    }
    return g;
}

/// The group holding at least `threshold` of the weight, if any.
std::optional<std::size_t> locked_group(const BranchSet &branches, const std::vector<double> &w, double threshold) {
    auto g = group_weights(branches, w);
    auto top = std::max_element(g.begin(), g.end());
    if (top == g.end() || *top < threshold) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(top - g.begin());
}

void check_shadow(const DetectorDistribution &a, const DetectorDistribution &b, std::size_t run) {
    double diff = std::max(std::abs(a.p_d1 - b.p_d1), std::abs(a.p_d2 - b.p_d2));
    if (diff > kEngineTol) {
        throw Error(ErrorCode::EngineMismatch, "engines disagree by " + format_real(diff) + " at run " +
                                                   std::to_string(run));
    }
}

LockReport make_lock_report(const BranchSet &branches, const std::vector<double> &w, bool locked,
                            std::optional<std::size_t> since) {
    LockReport lock;
    lock.locked = locked;
    for (std::size_t k = 0; k < w.size(); ++k) {
        lock.spectral_weights.emplace_back(branches.eigenvalues[k], w[k]);
    }
    for (auto [i, j] : branches.unresolvable) {
        lock.unresolvable.emplace_back(branches.eigenvalues[i], branches.eigenvalues[j]);
    }
    if (!w.empty()) {
        auto g = group_weights(branches, w);
        std::size_t top_group = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
        std::size_t best = w.size();
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (branches.group[k] == top_group && (best == w.size() || w[k] > w[best])) {
                best = k;
            }
        }
        lock.locked_branch = best;
        lock.locked_value = branches.eigenvalues[best];
    }
    if (locked) {
        lock.runs_to_lock = since;
    }
    return lock;
}

}  // namespace

TrialResult run_trial(SchemeEngine &engine, const BranchSet &branches, std::size_t runs, double lock_threshold,
                      Rng &rng, bool record_runs, SchemeEngine *shadow) {
    TrialResult res;
    std::vector<double> w = engine.weights();
    // First run index at which each group held the lock. Post-lock counts
    // start there even if the weight later dips below the threshold.
    std::vector<std::optional<std::size_t>> first_lock(branches.group_count());
    std::optional<std::size_t> group = locked_group(branches, w, lock_threshold);
    if (group) {
        first_lock[*group] = 0;
    }
    std::vector<unsigned char> outcomes(runs);
    for (std::size_t n = 0; n < runs; ++n) {
        DetectorDistribution dist = engine.probabilities();
        if (shadow != nullptr) {
            check_shadow(dist, shadow->probabilities(), n);
        }
        Detector outcome = rng.uniform() < dist.p_d1 ? Detector::D1 : Detector::D2;
        if (record_runs) {
            res.runs.push_back({n, outcome, engine.expectation(), dist});
        }
        outcomes[n] = static_cast<unsigned char>(outcome);
        res.pattern.add(outcome);
        engine.update(outcome);
        if (shadow != nullptr) {
            shadow->update(outcome);
        }
        w = engine.weights();
        group = locked_group(branches, w, lock_threshold);
        if (group && !first_lock[*group]) {
            first_lock[*group] = n + 1;
        }
    }
    bool locked = group.has_value();
    std::optional<std::size_t> since;
    if (locked) {
        since = first_lock[*group];
        for (std::size_t n = *since; n < runs; ++n) {
            res.post_lock.add(static_cast<Detector>(outcomes[n]));
        }
    }
    res.lock = make_lock_report(branches, w, locked, since);
    res.final_expectation = engine.expectation();
    res.final_state = engine.state();
    res.final_density = engine.density();
    return res;
}

TrialResult simulate_one_to_one(const SchemeConfig &cfg, Rng &rng) {
    const MonodromySpec &spec = cfg.monodromy;
    BranchSet branches = BranchSet::build(cfg.apparatus, spec.spectrum.eigenvalues);
    SpectralEngine spectral(branches, spec.spectrum.weights(cfg.psi));
    std::unique_ptr<SchemeEngine> oracle;
    if (cfg.engine != EngineKind::Spectral) {
        if (std::abs(cfg.apparatus.q - 1) <= 1e-15) {
            oracle = std::make_unique<OneToOneStateEngine>(cfg.apparatus, spec, cfg.psi);
        } else {
            oracle = std::make_unique<OneToOneDensityEngine>(cfg.apparatus, spec, ComplexMatrix::outer(cfg.psi, cfg.psi));
        }
    }
    switch (cfg.engine) {
        case EngineKind::Spectral:
            return run_trial(spectral, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs);
        case EngineKind::Oracle:
            return run_trial(*oracle, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs);
        case EngineKind::Both:
            return run_trial(*oracle, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs, &spectral);
    }
    return {};
}

TrialResult simulate_many_to_many(const SchemeConfig &cfg, Rng &rng) {
    TrialResult res;
    Complex z = expectation(cfg.monodromy.monodromy, cfg.psi);
    DetectorDistribution dist = prob_na(cfg.apparatus, z);
    for (std::size_t n = 0; n < cfg.runs; ++n) {
        Detector outcome = rng.uniform() < dist.p_d1 ? Detector::D1 : Detector::D2;
        if (cfg.record_runs) {
            res.runs.push_back({n, outcome, z, dist});
        }
        res.pattern.add(outcome);
    }
    BranchSet branches = BranchSet::build(cfg.apparatus, cfg.monodromy.spectrum.eigenvalues);
    res.lock = make_lock_report(branches, cfg.monodromy.spectrum.weights(cfg.psi), false, std::nullopt);
    res.final_expectation = z;
    res.final_state = cfg.psi;
    return res;
}

TrialResult simulate_many_to_one(const SchemeConfig &cfg, Rng &rng) {
    const MonodromySpec &spec = cfg.monodromy;
    ComplexMatrix rho_b = cfg.rho_b();
    ComplexMatrix rho_a = cfg.initial_rho_a();
    UOperator u = compute_U(spec.monodromy, rho_b, spec.dim_incoming, spec.dim_stationary);
    BranchSet branches = BranchSet::build(cfg.apparatus, u.spectrum.eigenvalues);
    std::unique_ptr<SpectralEngine> spectral;
    if (cfg.engine != EngineKind::Oracle) {
        double res = many_to_one_spectral_residual(cfg.apparatus, spec, rho_b, u);
        if (res > 1e-9) {
            throw Error(ErrorCode::InvalidConfig,
                        "the spectral many-to-one update is not exact for this monodromy and beam state (residual " +
                            format_real(res) + "); use engine \"oracle\"");
        }
        spectral = std::make_unique<SpectralEngine>(branches, u.spectrum.weights(rho_a));
    }
    std::unique_ptr<ManyToOneReducedEngine> oracle;
    if (cfg.engine != EngineKind::Spectral) {
        oracle = std::make_unique<ManyToOneReducedEngine>(cfg.apparatus, spec, rho_b, u, rho_a);
    }
    switch (cfg.engine) {
        case EngineKind::Spectral:
            return run_trial(*spectral, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs);
        case EngineKind::Oracle:
            return run_trial(*oracle, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs);
        case EngineKind::Both:
            return run_trial(*oracle, branches, cfg.runs, cfg.lock_threshold, rng, cfg.record_runs, spectral.get());
    }
    return {};
}

ProbeTrial probe_conjecture_trial(const SchemeConfig &cfg, Rng &rng) {
    FullStateManyToOne engine(cfg.apparatus, cfg.monodromy, cfg.psi_b, cfg.joint, cfg.env_dim);
    ProbeTrial out;
    for (std::size_t n = 0; n < cfg.runs; ++n) {
        out.expectations.push_back(engine.expectation());
        DetectorDistribution dist = engine.probabilities();
        engine.update(rng.uniform() < dist.p_d1 ? Detector::D1 : Detector::D2);
    }
    out.expectations.push_back(engine.expectation());
    std::size_t m = out.expectations.size();
    out.final_value = out.expectations[m - 1];
    out.stabilized = std::abs(out.expectations[m - 1] - out.expectations[m - 2]) <= cfg.stabilization_tol;
    return out;
}

namespace {

template <typename T, typename F>
std::vector<T> parallel_trials(std::size_t trials, std::size_t threads, F &&body) {
    std::vector<T> results(trials);
    std::vector<std::exception_ptr> errors(trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t t = next++; t < trials; t = next++) {
            try {
                results[t] = body(t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    threads = std::max<std::size_t>(1, std::min(threads, trials));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

}  // namespace

ProbeReport probe_conjecture(const SchemeConfig &cfg, std::size_t threads) {
    cfg.validate();
    ProbeReport report;
    report.trials = parallel_trials<ProbeTrial>(cfg.trials, threads, [&](std::size_t t) {
        Rng rng(cfg.seed, t);
        return probe_conjecture_trial(cfg, rng);
    });
    UOperator u = compute_U(cfg.monodromy.monodromy, cfg.rho_b(), cfg.monodromy.dim_incoming,
                            cfg.monodromy.dim_stationary);
    report.kappas = u.spectrum.eigenvalues;
    std::size_t dim = cfg.monodromy.dim_stationary * cfg.env_dim;
    for (std::size_t n = 0; n < cfg.runs; ++n) {
        dim *= cfg.monodromy.dim_incoming;
    }
    report.max_dim = dim;
    const double cluster_tol = 1e-2;
    for (const ProbeTrial &t : report.trials) {
        if (!t.stabilized) {
            continue;
        }
        ++report.stabilized;
        auto it = std::find_if(report.clusters.begin(), report.clusters.end(),
                               [&](const ProbeCluster &c) { return std::abs(c.value - t.final_value) <= cluster_tol; });
        if (it == report.clusters.end()) {
            ProbeCluster c;
            c.value = t.final_value;
            c.count = 1;
            report.clusters.push_back(c);
        } else {
            ++it->count;
        }
    }
    for (ProbeCluster &c : report.clusters) {
        for (Complex k : report.kappas) {
            c.matches_kappa = c.matches_kappa || std::abs(c.value - k) <= cluster_tol;
        }
    }
    std::sort(report.clusters.begin(), report.clusters.end(), [](const ProbeCluster &a, const ProbeCluster &b) {
        if (a.value.real() != b.value.real()) {
            return a.value.real() > b.value.real();
        }
        return a.value.imag() > b.value.imag();
    });
    return report;
}

std::vector<TrialResult> run_trials(const SchemeConfig &cfg, std::size_t threads) {
    cfg.validate();
    if (cfg.scheme == Scheme::ConjectureProbe) {
        throw Error(ErrorCode::InvalidConfig, "use probe_conjecture for the conjecture probe scheme");
    }
    return parallel_trials<TrialResult>(cfg.trials, threads, [&](std::size_t t) {
        Rng rng(cfg.seed, t);
        TrialResult r;
        switch (cfg.scheme) {
            case Scheme::ManyToMany:
                r = simulate_many_to_many(cfg, rng);
                break;
            case Scheme::OneToOne:
                r = simulate_one_to_one(cfg, rng);
                break;
            default:
                r = simulate_many_to_one(cfg, rng);
                break;
        }
        r.trial = t;
        return r;
    });
}

SimulationSummary summarize(const SchemeConfig &cfg, const std::vector<TrialResult> &trials) {
    SimulationSummary s;
    s.scheme = cfg.scheme;
    s.trials = trials.size();
    s.runs = cfg.runs;
    s.expected_average = cfg.expected_average();
    s.expected_pattern = prob_na(cfg.apparatus, s.expected_average);
    BranchSet branches = scheme_branches(cfg);
    for (auto [i, j] : branches.unresolvable) {
        s.unresolvable.emplace_back(branches.eigenvalues[i], branches.eigenvalues[j]);
    }
    if (cfg.scheme != Scheme::ManyToMany) {
        for (std::size_t k = 0; k < branches.size(); ++k) {
            LockBin bin;
            bin.branch = k;
            bin.value = branches.eigenvalues[k];
            bin.expected_pattern = branches.patterns[k];
            s.bins.push_back(bin);
        }
    }
    Complex sum_locked = 0;
    double sum_sq = 0;
    Complex sum_final = 0;
    std::vector<double> runs_to_lock(s.bins.size(), 0.0);
    for (const TrialResult &t : trials) {
        s.pattern.merge(t.pattern);
        sum_final += t.final_expectation;
        if (!t.lock.locked || s.bins.empty()) {
            continue;
        }
        ++s.locked_trials;
        LockBin &bin = s.bins[t.lock.locked_branch];
        ++bin.count;
        bin.post_lock.merge(t.post_lock);
        runs_to_lock[t.lock.locked_branch] += static_cast<double>(t.lock.runs_to_lock.value_or(0));
        sum_locked += t.lock.locked_value;
        sum_sq += t.lock.locked_value.real() * t.lock.locked_value.real();
    }
    for (std::size_t k = 0; k < s.bins.size(); ++k) {
        LockBin &bin = s.bins[k];
        bin.frequency = s.trials == 0 ? 0.0 : static_cast<double>(bin.count) / static_cast<double>(s.trials);
        bin.mean_runs_to_lock = bin.count == 0 ? 0.0 : runs_to_lock[k] / static_cast<double>(bin.count);
    }
    if (s.locked_trials > 0) {
        double n = static_cast<double>(s.locked_trials);
        s.mean_locked_value = sum_locked / n;
        double var = std::max(0.0, sum_sq / n - s.mean_locked_value.real() * s.mean_locked_value.real());
        s.locked_value_stderr = std::sqrt(var / n);
    }
    if (!trials.empty()) {
        s.mean_final_expectation = sum_final / static_cast<double>(trials.size());
    }
    return s;
}

}  // namespace anyonlab
