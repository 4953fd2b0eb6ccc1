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

#ifndef ANYONLAB_SCHEMES_H
#define ANYONLAB_SCHEMES_H

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anyonlab/apparatus.h"
#include "anyonlab/braid.h"
#include "anyonlab/linalg.h"
#include "anyonlab/rng.h"

namespace anyonlab {

enum class Scheme { ManyToMany, OneToOne, ManyToOne, ConjectureProbe };
enum class EngineKind { Spectral, Oracle, Both };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string &name);
std::string engine_name(EngineKind e);
EngineKind parse_engine(const std::string &name);

inline constexpr double kDefaultLockThreshold = 1 - 1e-6;
inline constexpr double kZeroNormTol = 1e-14;
inline constexpr double kEngineTol = 1e-10;
inline constexpr double kResolveTol = 1e-12;

struct RunRecord {
    std::size_t run_index = 0;
    Detector outcome = Detector::D1;
    Complex pre_expectation;
    DetectorDistribution probabilities;
};

struct PatternEstimate {
    std::size_t n = 0;
    std::size_t count_d1 = 0;
    std::size_t count_d2 = 0;

    void add(Detector d) {
        ++n;
        ++(d == Detector::D1 ? count_d1 : count_d2);
    }
    void merge(const PatternEstimate &other) {
        n += other.n;
        count_d1 += other.count_d1;
        count_d2 += other.count_d2;
    }
    double frequency(Detector d) const {
        return n == 0 ? 0.0 : static_cast<double>(d == Detector::D1 ? count_d1 : count_d2) / static_cast<double>(n);
    }
};

/// Eigenvalue branches an engine tracks: eigenvalues of R^2 (one-to-one) or
/// of U (many-to-one), each with its locked detector distribution. Branches
/// whose distributions coincide cannot be told apart by any outcome sequence
/// and share a group.
struct BranchSet {
    std::vector<Complex> eigenvalues;
    std::vector<DetectorDistribution> patterns;
    std::vector<std::size_t> group;  // group id per branch
    std::vector<std::pair<std::size_t, std::size_t>> unresolvable;

    static BranchSet build(const Apparatus &app, std::span<const Complex> eigenvalues, double tol = kResolveTol);
    std::size_t size() const noexcept {
        return eigenvalues.size();
    }
    std::size_t group_count() const noexcept;
};

struct LockReport {
    bool locked = false;
    std::size_t locked_branch = 0;
    Complex locked_value;
    std::vector<std::pair<Complex, double>> spectral_weights;
    std::optional<std::size_t> runs_to_lock;
    std::vector<std::pair<Complex, Complex>> unresolvable;
};

/// One trial's outcome. `post_lock` counts only the runs made after the last
/// transition into the locked state.
struct TrialResult {
    std::size_t trial = 0;
    PatternEstimate pattern;
    PatternEstimate post_lock;
    LockReport lock;
    Complex final_expectation;
    std::vector<RunRecord> runs;  // filled only when recording is on
    ComplexVector final_state;    // pure-state engines
    ComplexMatrix final_density;  // density engines
};

/// A stochastic engine for repeated runs. `probabilities` gives the next run's
/// detector distribution; `update` conditions on an observed outcome.
class SchemeEngine {
   public:
    virtual ~SchemeEngine() = default;
    virtual DetectorDistribution probabilities() const = 0;
    virtual void update(Detector outcome) = 0;
    /// Branch weights in BranchSet order.
    virtual std::vector<double> weights() const = 0;
    /// The quantity whose eigenvalues label the branches: <R^2> or Tr(U rho_A).
    virtual Complex expectation() const = 0;
    virtual ComplexVector state() const {
        return {};
    }
    virtual ComplexMatrix density() const {
        return {};
    }
};

// ---- single-run primitives ---------------------------------------------------

/// prob_na(app, <psi|R^2|psi>)
DetectorDistribution run_probabilities(const Apparatus &app, std::span<const Complex> psi,
                                       const ComplexMatrix &monodromy);

struct Projection {
    ComplexVector state;  // normalized
    double k = 0;         // squared norm before normalization
};

/// Normalized outcome component (a R + b R^-1)|psi> on V^A (x) V^B, with the
/// path coefficients of `outcome`.
Projection project_after_detection(const Apparatus &app, const MonodromySpec &spec, std::span<const Complex> psi,
                                   Detector outcome);

/// project_after_detection followed by the return pass, so the result is
/// back on V^B (x) V^A and equals (a R^2 + b) psi / sqrt(K).
Projection step_one_to_one(const Apparatus &app, const MonodromySpec &spec, std::span<const Complex> psi,
                           Detector outcome);

struct DensityStep {
    ComplexMatrix rho;  // normalized
    double probability = 0;
};

/// One-to-one update of a density matrix on V^B (x) V^A; the R^2 versus 1
/// cross terms carry the dephasing factor Q.
DensityStep step_one_to_one_density(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho,
                                    Detector outcome);

/// Many-to-one update of rho_A by a fresh B in state rho_B:
///   rho' = M (rho_B (x) rho_A) M^dag,  M = a R + b R^-1,
/// with the R versus R^-1 cross terms scaled by Q, then the B factor traced out.
DensityStep step_many_to_one(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho_a,
                             const ComplexMatrix &rho_b, Detector outcome);

struct UOperator {
    ComplexMatrix u;
    SpectralDecomposition spectrum;
};
/// U = Tr_B(rho_B R^2), validated normal with |kappa| <= 1.
UOperator compute_U(const ComplexMatrix &monodromy, const ComplexMatrix &rho_b, std::size_t dim_b, std::size_t dim_a,
                    const SpectralOptions &options = {});

/// Residual of the dual-channel identity Phi_D^*(E_kappa) = P_kappa[D] E_kappa
/// over both outcomes and all kappa. Zero means the many-to-one spectral
/// weights follow the multiplicative update exactly.
double many_to_one_spectral_residual(const Apparatus &app, const MonodromySpec &spec, const ComplexMatrix &rho_b,
                                     const UOperator &u);

/// Normalized state sum_k sqrt(w_k) v_k where v_k is a unit vector in the
/// k-th eigenspace of `spectrum`.
ComplexVector state_with_weights(const SpectralDecomposition &spectrum,
                                 std::span<const std::pair<Complex, double>> weights, double tol = 1e-8);

// ---- engines -----------------------------------------------------------------

/// Branch weights updated multiplicatively: p_k <- p_k P_k[D] / P[D].
class SpectralEngine : public SchemeEngine {
   public:
    SpectralEngine(BranchSet branches, std::vector<double> weights);
    DetectorDistribution probabilities() const override;
    void update(Detector outcome) override;
    std::vector<double> weights() const override {
        return weights_;
    }
    Complex expectation() const override;

   private:
    BranchSet branches_;
    std::vector<double> weights_;
};

/// Full internal state of the A-B pair, evolved with the braid operators.
/// Requires Q = 1.
class OneToOneStateEngine : public SchemeEngine {
   public:
    OneToOneStateEngine(const Apparatus &app, const MonodromySpec &spec, ComplexVector psi);
    DetectorDistribution probabilities() const override;
    void update(Detector outcome) override;
    std::vector<double> weights() const override;
    Complex expectation() const override;
    ComplexVector state() const override {
        return psi_;
    }

   private:
    Apparatus app_;
    MonodromySpec spec_;
    ComplexVector psi_;
};

/// Density matrix of the A-B pair; valid for any Q.
class OneToOneDensityEngine : public SchemeEngine {
   public:
    OneToOneDensityEngine(const Apparatus &app, const MonodromySpec &spec, ComplexMatrix rho);
    DetectorDistribution probabilities() const override;
    void update(Detector outcome) override;
    std::vector<double> weights() const override;
    Complex expectation() const override;
    ComplexMatrix density() const override {
        return rho_;
    }

   private:
    Apparatus app_;
    MonodromySpec spec_;
    ComplexMatrix rho_;
};

/// Reduced density matrix of A, updated with step_many_to_one.
class ManyToOneReducedEngine : public SchemeEngine {
   public:
    ManyToOneReducedEngine(const Apparatus &app, const MonodromySpec &spec, ComplexMatrix rho_b, UOperator u,
                           ComplexMatrix rho_a);
    DetectorDistribution probabilities() const override;
    void update(Detector outcome) override;
    std::vector<double> weights() const override;
    Complex expectation() const override;
    ComplexMatrix density() const override {
        return rho_a_;
    }

   private:
    Apparatus app_;
    MonodromySpec spec_;
    ComplexMatrix rho_b_;
    UOperator u_;
    ComplexMatrix rho_a_;
    mutable std::vector<DensityStep> cache_;
};

/// Pure state of A, an optional environment that entangles with it, and every
/// B that has passed, in the tensor layout A (x) B_n (x) ... (x) B_1 (x) Env.
/// Each run tensors a fresh B on the left, applies a R + b R^-1 to the
/// B_new (x) A pair and renormalizes. Requires Q = 1.
class FullStateManyToOne : public SchemeEngine {
   public:
    /// `joint` lives on V^A (x) V^Env.
    FullStateManyToOne(const Apparatus &app, const MonodromySpec &spec, ComplexVector psi_b, ComplexVector joint,
                       std::size_t env_dim, std::size_t dimension_cap = kDefaultDimensionCap);

    DetectorDistribution probabilities() const override;
    void update(Detector outcome) override;
    /// Weights Tr(E_kappa rho_A) against the U of the fresh-B state.
    std::vector<double> weights() const override;
    Complex expectation() const override;
    ComplexVector state() const override {
        return state_;
    }
    ComplexMatrix density() const override {
        return reduced_a();
    }

    ComplexMatrix reduced_a() const;
    std::size_t dim() const noexcept {
        return state_.size();
    }
    std::size_t b_count() const noexcept {
        return b_count_;
    }
    const UOperator &u() const noexcept {
        return u_;
    }

   private:
    Projection project(Detector outcome) const;

    Apparatus app_;
    MonodromySpec spec_;
    ComplexVector psi_b_;
    ComplexVector state_;
    std::size_t rest_dim_;  // everything to the right of A
    std::size_t cap_;
    std::size_t b_count_ = 0;
    UOperator u_;
    mutable std::vector<Projection> cache_;
};

// ---- configuration and simulation --------------------------------------------

struct SchemeConfig {
    Scheme scheme = Scheme::OneToOne;
    Apparatus apparatus = Apparatus::paper_example();
    MonodromySpec monodromy;
    ComplexVector psi;                  // one-to-one, many-to-many: on V^B (x) V^A
    ComplexVector psi_b;                // many-to-one beam state
    std::optional<ComplexMatrix> rho_a; // many-to-one initial A state
    ComplexVector joint;                // probe: entangled state on V^A (x) V^Env
    std::size_t env_dim = 1;
    std::size_t runs = 1;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    double lock_threshold = kDefaultLockThreshold;
    EngineKind engine = EngineKind::Spectral;
    bool record_runs = false;
    double stabilization_tol = 1e-3;

    /// Throws InvalidConfig naming the offending field.
    void validate() const;
    /// <psi|R^2|psi> for one-to-one and many-to-many, Tr(U rho_A) for many-to-one.
    Complex expected_average() const;
    ComplexMatrix rho_b() const;
    ComplexMatrix initial_rho_a() const;
};

/// Samples one outcome per run from `engine` (and checks `shadow` agrees on
/// every run's probabilities when given). Locking uses group weights.
TrialResult run_trial(SchemeEngine &engine, const BranchSet &branches, std::size_t runs, double lock_threshold,
                      Rng &rng, bool record_runs, SchemeEngine *shadow = nullptr);

TrialResult simulate_one_to_one(const SchemeConfig &cfg, Rng &rng);
TrialResult simulate_many_to_many(const SchemeConfig &cfg, Rng &rng);
TrialResult simulate_many_to_one(const SchemeConfig &cfg, Rng &rng);

/// Branch set the scheme locks onto (R^2 or U eigenvalues).
BranchSet scheme_branches(const SchemeConfig &cfg);

struct ProbeTrial {
    std::vector<Complex> expectations;  // Tr(U rho_A) before each run
    bool stabilized = false;
    Complex final_value;
};

struct ProbeCluster {
    Complex value;
    std::size_t count = 0;
    bool matches_kappa = false;
};

/// Full-state many-to-one evolution from an arbitrary (possibly entangled)
/// initial A state. No claim is asserted; the report describes whether the
/// run expectations stabilize and where.
struct ProbeReport {
    std::vector<ProbeTrial> trials;
    std::vector<ProbeCluster> clusters;
    std::vector<Complex> kappas;  // eigenvalues of U for the fresh-B state
    std::size_t stabilized = 0;
    std::size_t max_dim = 0;
};
ProbeTrial probe_conjecture_trial(const SchemeConfig &cfg, Rng &rng);
ProbeReport probe_conjecture(const SchemeConfig &cfg, std::size_t threads = 1);

struct LockBin {
    std::size_t branch = 0;
    Complex value;
    std::size_t count = 0;
    double frequency = 0;
    PatternEstimate post_lock;
    DetectorDistribution expected_pattern;
    double mean_runs_to_lock = 0;
};

struct SimulationSummary {
    Scheme scheme = Scheme::OneToOne;
    std::size_t trials = 0;
    std::size_t runs = 0;
    PatternEstimate pattern;
    std::size_t locked_trials = 0;
    std::vector<LockBin> bins;
    Complex mean_locked_value;
    double locked_value_stderr = 0;  // standard error of the real part
    Complex mean_final_expectation;
    Complex expected_average;
    DetectorDistribution expected_pattern;  // single-run distribution of the initial state
    std::vector<std::pair<Complex, Complex>> unresolvable;
};

/// Runs every trial with stream (seed, trial) on up to `threads` threads and
/// returns results in trial order.
std::vector<TrialResult> run_trials(const SchemeConfig &cfg, std::size_t threads = 1);
SimulationSummary summarize(const SchemeConfig &cfg, const std::vector<TrialResult> &trials);

}  // namespace anyonlab

#endif
