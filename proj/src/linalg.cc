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

#include "anyonlab/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <string>

#include "anyonlab/error.h"

namespace anyonlab {

namespace {

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

double max_abs(const ComplexMatrix &m) {
    double out = 0;
    for (const auto &z : m.entries()) {
        out = std::max(out, std::abs(z));
    }
    return out;
}

/// Union-find style grouping: items i and j share a group when linked(i, j).
template <typename Linked>
std::vector<std::vector<std::size_t>> group_by(std::size_t n, Linked linked) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (linked(i, j)) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = find(i);
        if (slot[root] == n) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

ComplexVector column(const ComplexMatrix &m, std::size_t c) {
    ComplexVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out[r] = m(r, c);
    }
    return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0, 0)) {
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix entry count " + std::to_string(entries_.size()) +
                                                      " does not match " + std::to_string(rows_) + "x" +
                                                      std::to_string(cols_));
    }
    for (const auto &z : entries_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::NonFinite, "matrix entries must be finite");
        }
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out(k, k) = 1;
    }
    return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    ComplexMatrix out(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        out(k, k) = diag[k];
    }
    return out;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> entries;
    entries.reserve(r * c);
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> a, std::span<const Complex> b) {
    ComplexMatrix out(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < b.size(); ++c) {
            out(r, c) = a[r] * std::conj(b[c]);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw Error(ErrorCode::NotSquare, "trace of non-square matrix");
    }
    Complex out = 0;
    for (std::size_t k = 0; k < rows_; ++k) {
        out += (*this)(k, k);
    }
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0;
    for (const auto &z : entries_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix sum");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix difference");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " * " +
                                                      std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            Complex ark = a(r, k);
            if (ark == Complex(0, 0)) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix m) {
    m *= s;
    return m;
}

ComplexVector operator*(const ComplexMatrix &m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector product " + std::to_string(m.cols()) + " vs " +
                                                      std::to_string(v.size()));
    }
    ComplexVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc += m(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "inner product of vectors with different lengths");
    }
    Complex acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

double norm(std::span<const Complex> v) {
    double s = 0;
    for (const auto &z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

ComplexVector normalized(std::span<const Complex> v) {
    double n = norm(v);
    if (!(n > 0)) {
        throw Error(ErrorCode::InvalidState, "cannot normalize the zero vector");
    }
    ComplexVector out(v.begin(), v.end());
    for (auto &z : out) {
        z /= n;
    }
    return out;
}

Complex expectation(const ComplexMatrix &m, std::span<const Complex> v) {
    return inner(v, m * v);
}

Complex expectation(const ComplexMatrix &m, const ComplexMatrix &rho) {
    if (m.cols() != rho.rows() || m.rows() != rho.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "Tr(m rho) with incompatible shapes");
    }
    Complex acc = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            acc += m(r, k) * rho(k, r);
        }
    }
    return acc;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "matrix comparison");
    return max_abs_diff(a.entries(), b.entries());
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "vector comparison with different lengths");
    }
    double out = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out = std::max(out, std::abs(a[k] - b[k]));
    }
    return out;
}

double normality_residual(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw Error(ErrorCode::NotSquare, "normality of non-square matrix");
    }
    ComplexMatrix md = m.adjoint();
    return max_abs_diff(m * md, md * m);
}

double unitarity_residual(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw Error(ErrorCode::NotSquare, "unitarity of non-square matrix");
    }
    return max_abs_diff(m.adjoint() * m, ComplexMatrix::identity(m.rows()));
}

double hermiticity_residual(const ComplexMatrix &m) {
    if (!m.is_square()) {
        throw Error(ErrorCode::NotSquare, "hermiticity of non-square matrix");
    }
    return max_abs_diff(m, m.adjoint());
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b, std::size_t dimension_cap) {
    std::size_t rows = a.rows() * b.rows();
    std::size_t cols = a.cols() * b.cols();
    if (rows > dimension_cap || cols > dimension_cap) {
        throw Error(ErrorCode::SizeOverflow, "tensor product dimension " + std::to_string(std::max(rows, cols)) +
                                                 " exceeds cap " + std::to_string(dimension_cap));
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            Complex s = a(ar, ac);
            if (s == Complex(0, 0)) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b, std::size_t dimension_cap) {
    if (a.size() * b.size() > dimension_cap) {
        throw Error(ErrorCode::SizeOverflow, "tensor product dimension " + std::to_string(a.size() * b.size()) +
                                                 " exceeds cap " + std::to_string(dimension_cap));
    }
    ComplexVector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

ComplexMatrix partial_trace_left(const ComplexMatrix &m, std::size_t dim_left, std::size_t dim_right,
                                 const ComplexMatrix &weight_left) {
    std::size_t n = dim_left * dim_right;
    if (m.rows() != n || m.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "partial trace: operator is " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()) + ", expected " +
                                                      std::to_string(n) + "x" + std::to_string(n));
    }
    if (weight_left.rows() != dim_left || weight_left.cols() != dim_left) {
        throw Error(ErrorCode::DimensionMismatch, "partial trace: weight must be " + std::to_string(dim_left) +
                                                      "x" + std::to_string(dim_left));
    }
    if (hermiticity_residual(weight_left) > 1e-10) {
        throw Error(ErrorCode::NotHermitian, "partial trace weight is not Hermitian");
    }
    ComplexMatrix out(dim_right, dim_right);
    for (std::size_t i = 0; i < dim_left; ++i) {
        for (std::size_t j = 0; j < dim_left; ++j) {
            Complex w = weight_left(j, i);
            if (w == Complex(0, 0)) {
                continue;
            }
            for (std::size_t a = 0; a < dim_right; ++a) {
                for (std::size_t b = 0; b < dim_right; ++b) {
                    out(a, b) += w * m(i * dim_right + a, j * dim_right + b);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace_right(const ComplexMatrix &m, std::size_t dim_left, std::size_t dim_right) {
    std::size_t n = dim_left * dim_right;
    if (m.rows() != n || m.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "partial trace over right factor: shape mismatch");
    }
    ComplexMatrix out(dim_left, dim_left);
    for (std::size_t a = 0; a < dim_left; ++a) {
        for (std::size_t b = 0; b < dim_left; ++b) {
            Complex acc = 0;
            for (std::size_t k = 0; k < dim_right; ++k) {
                acc += m(a * dim_right + k, b * dim_right + k);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

ComplexMatrix swap_operator(std::size_t dim_left, std::size_t dim_right) {
    std::size_t n = dim_left * dim_right;
    ComplexMatrix out(n, n);
    for (std::size_t a = 0; a < dim_left; ++a) {
        for (std::size_t b = 0; b < dim_right; ++b) {
            out(b * dim_left + a, a * dim_right + b) = 1;
        }
    }
    return out;
}

HermitianEigen jacobi_hermitian(const ComplexMatrix &h, int max_sweeps) {
    if (!h.is_square()) {
        throw Error(ErrorCode::NotSquare, "Jacobi diagonalization of non-square matrix");
    }
    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = a(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = avg;
            a(c, r) = std::conj(avg);
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale2 = std::max(1.0, a.frobenius_norm() * a.frobenius_norm());

    auto off_norm2 = [&]() {
        double s = 0;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = r + 1; c < n; ++c) {
                s += std::norm(a(r, c));
            }
        }
        return s;
    };

    bool converged = n < 2;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (off_norm2() <= 1e-30 * scale2) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                Complex g = a(p, q);
                double b = std::abs(g);
                if (b == 0) {
                    continue;
                }
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                if (b < 1e-300 || b <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
                    a(p, q) = 0;
                    a(q, p) = 0;
                    continue;
                }
                Complex phase = g / b;
                double tau = (aqq - app) / (2 * b);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                // u = diag(1, conj(phase)) * [[c, s], [-s, c]]
                Complex u00 = c;
                Complex u01 = s;
                Complex u10 = -s * std::conj(phase);
                Complex u11 = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = akp * u00 + akq * u10;
                    a(k, q) = akp * u01 + akq * u11;
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = vkp * u00 + vkq * u10;
                    v(k, q) = vkp * u01 + vkq * u11;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
                    a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (!converged && off_norm2() > 1e-24 * scale2) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "Jacobi sweeps exceeded " + std::to_string(max_sweeps) + " iterations");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    HermitianEigen out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix &m, const SpectralOptions &options) {
    if (!m.is_square()) {
        throw Error(ErrorCode::NotSquare, "spectral decomposition needs a square matrix, got " +
                                              std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const std::size_t n = m.rows();
    if (n == 0) {
        throw Error(ErrorCode::DimensionMismatch, "spectral decomposition of an empty matrix");
    }
    const double scale = std::max(1.0, max_abs(m));
    double residual = normality_residual(m);
    if (residual > options.normality_tol * scale * scale) {
        throw Error(ErrorCode::NotNormal, "||m m^dag - m^dag m|| = " + format_real(residual) +
                                              " exceeds tolerance " + format_real(options.normality_tol));
    }

    const ComplexMatrix md = m.adjoint();
    ComplexMatrix herm = Complex(0.5) * (m + md);
    ComplexMatrix anti = Complex(0, -0.5) * (m - md);

    HermitianEigen he = jacobi_hermitian(herm, options.max_sweeps);
    ComplexMatrix vecs = he.vectors;

    // Inside each degenerate block of the Hermitian part, the anti-Hermitian part
    // still has to be diagonalized.
    const double block_tol = options.cluster_tol * scale;
    auto blocks = group_by(n, [&](std::size_t i, std::size_t j) {
        return std::abs(he.values[i] - he.values[j]) <= block_tol;
    });
    for (const auto &block : blocks) {
        if (block.size() < 2) {
            continue;
        }
        const std::size_t g = block.size();
        ComplexMatrix basis(n, g);
        for (std::size_t c = 0; c < g; ++c) {
            for (std::size_t r = 0; r < n; ++r) {
                basis(r, c) = vecs(r, block[c]);
            }
        }
        ComplexMatrix reduced = basis.adjoint() * anti * basis;
        HermitianEigen ke = jacobi_hermitian(reduced, options.max_sweeps);
        ComplexMatrix rotated = basis * ke.vectors;
        for (std::size_t c = 0; c < g; ++c) {
            for (std::size_t r = 0; r < n; ++r) {
                vecs(r, block[c]) = rotated(r, c);
            }
        }
    }

    std::vector<ComplexVector> columns(n);
    std::vector<Complex> raw(n);
    for (std::size_t k = 0; k < n; ++k) {
        columns[k] = column(vecs, k);
        raw[k] = expectation(m, columns[k]);
    }

    auto clusters = group_by(n, [&](std::size_t i, std::size_t j) {
        return std::abs(raw[i] - raw[j]) <= options.cluster_tol * scale;
    });

    struct Cluster {
        Complex value;
        std::vector<std::size_t> members;
    };
    std::vector<Cluster> ordered;
    for (auto &members : clusters) {
        Complex mean = 0;
        for (std::size_t k : members) {
            mean += raw[k];
        }
        mean /= static_cast<double>(members.size());
        ordered.push_back({mean, members});
    }
    std::sort(ordered.begin(), ordered.end(), [](const Cluster &x, const Cluster &y) {
        if (x.value.real() != y.value.real()) {
            return x.value.real() > y.value.real();
        }
        return x.value.imag() > y.value.imag();
    });

    // Re-orthogonalize (modified Gram-Schmidt over all kept vectors) and build
    // one projector per cluster.
    SpectralDecomposition out;
    out.source_dim = n;
    std::vector<ComplexVector> accepted;
    for (const auto &cluster : ordered) {
        ComplexMatrix projector(n, n);
        for (std::size_t k : cluster.members) {
            ComplexVector v = columns[k];
            for (const auto &u : accepted) {
                Complex overlap = inner(u, v);
                for (std::size_t r = 0; r < n; ++r) {
                    v[r] -= overlap * u[r];
                }
            }
            v = normalized(v);
            projector += ComplexMatrix::outer(v, v);
            accepted.push_back(std::move(v));
        }
        out.eigenvalues.push_back(cluster.value);
        out.projectors.push_back(std::move(projector));
    }

    SpectralResiduals res = spectral_residuals(m, out);
    if (res.reconstruction > 10 * options.cluster_tol * scale) {
        throw Error(ErrorCode::ConvergenceFailure,
                    "spectral reconstruction residual " + format_real(res.reconstruction) +
                        " exceeds 10 * cluster tolerance");
    }
    return out;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
    return apply_function([](Complex z) { return z; });
}

std::size_t SpectralDecomposition::find(Complex value, double tol) const {
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
        if (std::abs(eigenvalues[k] - value) <= tol) {
            return k;
        }
    }
    return eigenvalues.size();
}

std::vector<double> SpectralDecomposition::weights(std::span<const Complex> v) const {
    std::vector<double> out;
    out.reserve(projectors.size());
    for (const auto &e : projectors) {
        out.push_back(expectation(e, v).real());
    }
    return out;
}

std::vector<double> SpectralDecomposition::weights(const ComplexMatrix &rho) const {
    std::vector<double> out;
    out.reserve(projectors.size());
    for (const auto &e : projectors) {
        out.push_back(expectation(e, rho).real());
    }
    return out;
}

SpectralResiduals spectral_residuals(const ComplexMatrix &m, const SpectralDecomposition &spec) {
    SpectralResiduals res;
    res.reconstruction = max_abs_diff(m, spec.reconstruct());
    ComplexMatrix total(spec.source_dim, spec.source_dim);
    for (const auto &e : spec.projectors) {
        total += e;
    }
    res.completeness = max_abs_diff(total, ComplexMatrix::identity(spec.source_dim));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        for (std::size_t j = 0; j < spec.size(); ++j) {
            ComplexMatrix prod = spec.projectors[i] * spec.projectors[j];
            ComplexMatrix expected = i == j ? spec.projectors[i] : ComplexMatrix(spec.source_dim, spec.source_dim);
            res.orthogonality = std::max(res.orthogonality, max_abs_diff(prod, expected));
        }
    }
    res.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.size(); ++j) {
            res.min_separation = std::min(res.min_separation, std::abs(spec.eigenvalues[i] - spec.eigenvalues[j]));
        }
    }
    return res;
}

ComplexMatrix principal_sqrt(const SpectralDecomposition &spec) {
    return spec.apply_function([](Complex z) {
        double angle = std::arg(z);
        if (angle <= -std::numbers::pi + 1e-12) {
            angle = std::numbers::pi;
        }
        return std::polar(std::sqrt(std::abs(z)), angle / 2);
    });
}

DensityMatrix::DensityMatrix(ComplexMatrix rho, double tol) : rho_(std::move(rho)) {
    if (!rho_.is_square() || rho_.rows() == 0) {
        throw Error(ErrorCode::InvalidState, "density matrix must be square and non-empty");
    }
    if (hermiticity_residual(rho_) > tol) {
        throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
    }
    Complex tr = rho_.trace();
    if (std::abs(tr - Complex(1, 0)) > tol) {
        throw Error(ErrorCode::InvalidState, "density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    HermitianEigen eig = jacobi_hermitian(rho_);
    if (!eig.values.empty() && eig.values.front() < -std::sqrt(tol)) {
        throw Error(ErrorCode::InvalidState, "density matrix has negative eigenvalue " +
                                                 std::to_string(eig.values.front()));
    }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
    ComplexVector v = normalized(psi);
    return DensityMatrix(ComplexMatrix::outer(v, v));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    ComplexMatrix rho = ComplexMatrix::identity(dim);
    rho *= Complex(1.0 / static_cast<double>(dim));
    return DensityMatrix(std::move(rho));
}

}  // namespace anyonlab
