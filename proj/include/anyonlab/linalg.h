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

#ifndef ANYONLAB_LINALG_H
#define ANYONLAB_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace anyonlab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Largest total dimension (rows or cols) any operation will build.
inline constexpr std::size_t kDefaultDimensionCap = 4096;
inline constexpr double kDefaultNormalityTol = 1e-10;
inline constexpr double kDefaultClusterTol = 1e-8;

/// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    /// |a><b|
    static ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b);

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    bool is_square() const noexcept {
        return rows_ == cols_;
    }
    bool empty() const noexcept {
        return entries_.empty();
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    std::span<const Complex> entries() const noexcept {
        return entries_;
    }
    std::span<Complex> entries() noexcept {
        return entries_;
    }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix &m, std::span<const Complex> v);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);
ComplexVector normalized(std::span<const Complex> v);
/// <v|m|v>
Complex expectation(const ComplexMatrix &m, std::span<const Complex> v);
/// Tr(m rho)
Complex expectation(const ComplexMatrix &m, const ComplexMatrix &rho);

/// Max-entry distance, used for all "within tolerance" comparisons.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

/// ||m m^dag - m^dag m||_max
double normality_residual(const ComplexMatrix &m);
/// ||m^dag m - 1||_max
double unitarity_residual(const ComplexMatrix &m);
double hermiticity_residual(const ComplexMatrix &m);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b,
                   std::size_t dimension_cap = kDefaultDimensionCap);
ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b,
                   std::size_t dimension_cap = kDefaultDimensionCap);

/// Contracts the left tensor factor of `m` against `weight_left`:
///
///     out[a][b] = sum_{i,j} weight_left[j][i] * m[(i,a)][(j,b)]
///
/// where (i,a) = i * dim_right + a. With `weight_left` a density matrix this is
/// Tr_left((weight_left (x) 1) m).
ComplexMatrix partial_trace_left(const ComplexMatrix &m, std::size_t dim_left, std::size_t dim_right,
                                 const ComplexMatrix &weight_left);
/// Plain trace over the right tensor factor.
ComplexMatrix partial_trace_right(const ComplexMatrix &m, std::size_t dim_left, std::size_t dim_right);

/// Permutation taking V_left (x) V_right to V_right (x) V_left.
ComplexMatrix swap_operator(std::size_t dim_left, std::size_t dim_right);

struct SpectralOptions {
    double normality_tol = kDefaultNormalityTol;
    double cluster_tol = kDefaultClusterTol;
    int max_sweeps = 100;
};

/// Clustered spectral decomposition m = sum_k eigenvalues[k] * projectors[k].
struct SpectralDecomposition {
    std::vector<Complex> eigenvalues;
    std::vector<ComplexMatrix> projectors;
    std::size_t source_dim = 0;

    std::size_t size() const noexcept {
        return eigenvalues.size();
    }
    /// sum_k f(eigenvalues[k]) projectors[k]
    template <typename F>
    ComplexMatrix apply_function(F &&f) const {
        ComplexMatrix out(source_dim, source_dim);
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
            out += Complex(f(eigenvalues[k])) * projectors[k];
        }
        return out;
    }
    ComplexMatrix reconstruct() const;
    /// Index of the eigenvalue within `tol` of `value`, or size() if none.
    std::size_t find(Complex value, double tol) const;
    /// <v|E_k|v> for every k.
    std::vector<double> weights(std::span<const Complex> v) const;
    /// Tr(E_k rho) for every k.
    std::vector<double> weights(const ComplexMatrix &rho) const;
};

struct SpectralResiduals {
    double reconstruction = 0;
    double completeness = 0;
    double orthogonality = 0;
    double min_separation = 0;
};

SpectralResiduals spectral_residuals(const ComplexMatrix &m, const SpectralDecomposition &spec);

/// Decomposes a normal matrix. The Hermitian part is diagonalized with cyclic
/// Jacobi rotations, then the anti-Hermitian part is diagonalized inside each
/// degenerate block of the Hermitian part. Eigenvalues closer than
/// `cluster_tol` are merged into one projector.
SpectralDecomposition spectral_decompose(const ComplexMatrix &m, const SpectralOptions &options = {});

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns real eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as the columns of `vectors`.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;
};
HermitianEigen jacobi_hermitian(const ComplexMatrix &h, int max_sweeps = 100);

/// Principal square root sum_k sqrt(e^{i l_k}) E_k with l_k in (-pi, pi].
ComplexMatrix principal_sqrt(const SpectralDecomposition &spec);

/// Validated density matrix: Hermitian, positive semidefinite, unit trace.
class DensityMatrix {
   public:
    explicit DensityMatrix(ComplexMatrix rho, double tol = 1e-10);
    static DensityMatrix pure(std::span<const Complex> psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    const ComplexMatrix &matrix() const noexcept {
        return rho_;
    }
    std::size_t dim() const noexcept {
        return rho_.rows();
    }

   private:
    ComplexMatrix rho_;
};

}  // namespace anyonlab

#endif
