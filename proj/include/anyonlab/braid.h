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

#ifndef ANYONLAB_BRAID_H
#define ANYONLAB_BRAID_H

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anyonlab/linalg.h"

namespace anyonlab {

/// Particles placed on a line. Slots are numbered from the right starting at
/// one; the tensor product lists particles left to right, so slot 1 is the
/// last tensor factor.
class ParticleSystem {
   public:
    ParticleSystem() = default;
    /// `labels` in tensor (left-to-right) order.
    ParticleSystem(std::vector<std::string> labels, std::map<std::string, std::size_t> species_dims,
                   std::size_t dimension_cap = kDefaultDimensionCap);

    std::size_t size() const noexcept {
        return labels_.size();
    }
    std::span<const std::string> labels() const noexcept {
        return labels_;
    }
    const std::map<std::string, std::size_t> &species_dims() const noexcept {
        return species_dims_;
    }
    /// 1-based slot, counted from the right.
    const std::string &species_at_slot(std::size_t slot) const;
    std::size_t tensor_position(std::size_t slot) const;
    std::size_t dim_of(const std::string &species) const;
    std::size_t total_dim() const noexcept {
        return total_dim_;
    }
    /// Same particles with slots i and i+1 exchanged.
    ParticleSystem exchanged(std::size_t slot) const;

    bool operator==(const ParticleSystem &) const = default;

   private:
    std::vector<std::string> labels_;
    std::map<std::string, std::size_t> species_dims_;
    std::size_t total_dim_ = 1;
};

/// Counterclockwise exchange of a `left` particle with a `right` particle,
/// swap included: V^left (x) V^right -> V^right (x) V^left.
struct BraidMatrix {
    std::string left;
    std::string right;
    ComplexMatrix matrix;
};

/// Braid matrices keyed by ordered species pair.
class BraidRegistry {
   public:
    void set_dim(const std::string &species, std::size_t dim);
    /// Validates shape against registered dims and unitarity within `tol`.
    void add(BraidMatrix braid, double tol = 1e-10);

    const BraidMatrix *find(const std::string &left, const std::string &right) const;
    /// Throws MissingBraidMatrix.
    const BraidMatrix &at(const std::string &left, const std::string &right) const;

    const std::map<std::string, std::size_t> &dims() const noexcept {
        return dims_;
    }
    std::vector<std::string> species() const;
    const std::map<std::pair<std::string, std::string>, BraidMatrix> &entries() const noexcept {
        return entries_;
    }

    /// R^2 = R_{stationary,incoming} R_{incoming,stationary} on
    /// V^incoming (x) V^stationary.
    ComplexMatrix monodromy(const std::string &incoming, const std::string &stationary) const;

   private:
    std::map<std::string, std::size_t> dims_;
    std::map<std::pair<std::string, std::string>, BraidMatrix> entries_;
};

ComplexMatrix pure_swap(std::size_t dim_left, std::size_t dim_right);
/// e^{i phi} times the swap.
ComplexMatrix phase_swap(std::size_t dim, double phi);
/// 4x4 unitary braid matrix (1/sqrt 2)[[1,0,0,1],[0,1,-1,0],[0,1,1,0],[-1,0,0,1]].
ComplexMatrix bell_braid();

class PureState {
   public:
    PureState(ParticleSystem system, ComplexVector amplitudes, double tol = 1e-10);

    const ParticleSystem &system() const noexcept {
        return system_;
    }
    std::span<const Complex> amplitudes() const noexcept {
        return amplitudes_;
    }

   private:
    ParticleSystem system_;
    ComplexVector amplitudes_;
};

struct BraidLetter {
    std::size_t index;
    int sign;  // +1 for R_i, -1 for R_i^-1

    bool operator==(const BraidLetter &) const = default;
};

/// Product of adjacent exchanges written as an operator product: the rightmost
/// letter acts first.
struct BraidWord {
    std::vector<BraidLetter> letters;

    /// Parses e.g. "R2^-2 R3 R4 R5^2 R4^-1 R3".
    static BraidWord parse(std::string_view text);
    std::string to_string() const;
};

/// R_i (sign +1) or R_i^-1 (sign -1) on slots i, i+1. The inverse of the
/// exchange of particles (X left, Y right) uses the adjoint of the registered
/// (Y, X) matrix.
PureState apply_braid(const PureState &state, const BraidRegistry &registry, std::size_t i, int sign);
PureState apply_word(const PureState &state, const BraidRegistry &registry, const BraidWord &word);

/// Dense operator of a word on a system, built column by column from
/// apply_word. The resulting system (labels permuted) is returned alongside.
std::pair<ComplexMatrix, ParticleSystem> word_operator(const ParticleSystem &system, const BraidRegistry &registry,
                                                       const BraidWord &word);

struct YangBaxterReport {
    struct Relation {
        std::string description;
        double residual;
    };
    std::vector<Relation> relations;
    double max_residual = 0;

    bool passed(double tol) const noexcept {
        return max_residual <= tol;
    }
};

/// Checks R1 R2 R1 = R2 R1 R2 on every three-particle labelling and
/// R1 R3 = R3 R1 on every four-particle labelling drawn from `species`
/// (all registered species when empty). Labellings holding more copies of a
/// species than `max_copies` allows are skipped.
YangBaxterReport check_yang_baxter(const BraidRegistry &registry, std::vector<std::string> species = {},
                                   const std::map<std::string, std::size_t> &max_copies = {});

/// R^2 on V^incoming (x) V^stationary together with the two exchange operators
/// a passing particle picks up on the interferometer's two paths.
struct MonodromySpec {
    std::string incoming = "B";
    std::string stationary = "A";
    std::size_t dim_incoming = 1;
    std::size_t dim_stationary = 1;
    ComplexMatrix monodromy;  // R^2 on V^B (x) V^A
    ComplexMatrix ccw;        // R: V^B (x) V^A -> V^A (x) V^B
    ComplexMatrix cw;         // R^-1: V^B (x) V^A -> V^A (x) V^B
    ComplexMatrix ret;        // R: V^A (x) V^B -> V^B (x) V^A, so ret * ccw = R^2
    SpectralDecomposition spectrum;

    std::size_t dim() const noexcept {
        return dim_incoming * dim_stationary;
    }

    static MonodromySpec from_registry(const BraidRegistry &registry, const std::string &incoming,
                                       const std::string &stationary, const SpectralOptions &options = {});
    /// Only R^2 is known: take the principal square root r (eigenphases halved
    /// from (-pi, pi]) and use R = swap * r, R^-1 = swap * r^dag, and
    /// r * swap for the return pass.
    static MonodromySpec from_monodromy(ComplexMatrix monodromy, std::size_t dim_incoming,
                                        std::size_t dim_stationary, const SpectralOptions &options = {});

    /// Registry realising this monodromy, with trivial (pure swap) braiding
    /// between identical species.
    BraidRegistry registry() const;
};

}  // namespace anyonlab

#endif
