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

#include <numbers>

#include "gtest/gtest.h"

#include "anyonlab/error.h"
#include "anyonlab/fixtures.h"
#include "test_util.h"

using namespace anyonlab;

namespace {

const Complex I(0, 1);

BeamSplitter random_splitter(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> mix(0, std::numbers::pi / 2);
    double a = mix(rng);
    return BeamSplitter::from_left(std::polar(std::cos(a), u(rng)), std::polar(std::sin(a), u(rng)));
}

/// Detector D1 probability from explicit path amplitudes. The dephasing is
/// modeled as an equal mixture of two path phases theta +- delta, which gives
/// Q = cos(delta).
double path_sum_d1(const Apparatus &app, Complex phase) {
    double delta = std::acos(app.q);
    double p = 0;
    for (double s : {-1.0, 1.0}) {
        Complex ccw = app.bs1.t * app.bs2.r_prime * std::exp(I * (app.theta + s * delta)) * phase;
        Complex cw = app.bs1.r * app.bs2.t;
        p += 0.5 * std::norm(ccw + cw);
    }
    return p;
}

}  // namespace

TEST(BeamSplitter, completion_and_validation) {
    const double h = 1 / std::numbers::sqrt2;
    BeamSplitter b = BeamSplitter::from_left(Complex(0, h), h);
    EXPECT_NEAR(std::abs(b.r_prime - h), 0, 1e-16);
    EXPECT_NEAR(std::abs(b.t_prime - Complex(0, h)), 0, 1e-16);
    EXPECT_NO_THROW(b.validate());

    BeamSplitter lossy = BeamSplitter::from_left(0.5, 0.5);
    try {
        lossy.validate();
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidApparatus);
    }
    BeamSplitter wrong_prime = b;
    wrong_prime.t_prime = -wrong_prime.t_prime;
    EXPECT_THROW(wrong_prime.validate(), Error);

    // The unitary [[t, r'], [r, t']] of a valid splitter.
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        BeamSplitter s = random_splitter(rng);
        EXPECT_NO_THROW(s.validate());
        ComplexMatrix u = ComplexMatrix::from_rows({{s.t, s.r_prime}, {s.r, s.t_prime}});
        EXPECT_LE(unitarity_residual(u), 1e-14);
    }
}

TEST(Apparatus, dephasing_range) {
    Apparatus app = Apparatus::paper_example();
    app.q = 1.2;
    EXPECT_THROW(app.validate(), Error);
    app.q = -0.1;
    EXPECT_THROW(app.validate(), Error);
    app.q = 0;
    EXPECT_NO_THROW(app.validate());
}

TEST(Apparatus, example_splitters) {
    Apparatus app = Apparatus::paper_example();
    EXPECT_NEAR(std::cos(app.theta), 0.8, 1e-15);
    EXPECT_NEAR(std::sin(app.theta), 0.6, 1e-15);
    EXPECT_NEAR(std::abs(cross_term(app) - 0.25 * std::exp(I * app.theta)), 0, 1e-15);
}

TEST(prob_ordinary, example_pattern) {
    DetectorDistribution d = prob_ordinary(Apparatus::paper_example());
    EXPECT_NEAR(d.p_d1, 0.9, 1e-12);
    EXPECT_NEAR(d.p_d2, 0.1, 1e-12);
}

TEST(prob_ab, example_patterns) {
    Apparatus app = Apparatus::paper_example();
    DetectorDistribution minus = prob_ab(app, -1.0);
    EXPECT_NEAR(minus.p_d1, 0.1, 1e-12);
    EXPECT_NEAR(minus.p_d2, 0.9, 1e-12);
    DetectorDistribution quarter = prob_ab(app, I);
    EXPECT_NEAR(quarter.p_d1, 0.2, 1e-12);
    EXPECT_NEAR(quarter.p_d2, 0.8, 1e-12);
    try {
        prob_ab(app, 0.5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnitModulus);
    }
}

TEST(prob_ab, matches_path_sum_for_random_apparatus) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 200; ++rep) {
        Apparatus app{random_splitter(rng), random_splitter(rng), u(rng), 2 * std::numbers::pi * u(rng)};
        Complex phase = std::polar(1.0, 2 * std::numbers::pi * u(rng));
        DetectorDistribution d = prob_ab(app, phase);
        EXPECT_NEAR(d.p_d1, path_sum_d1(app, phase), 1e-12);
        EXPECT_NEAR(d.p_d1 + d.p_d2, 1.0, 1e-12);
        EXPECT_GE(d.p_d1, 0.0);
        EXPECT_GE(d.p_d2, 0.0);
        DetectorDistribution o = prob_ordinary(app);
        EXPECT_NEAR(o.p_d1, path_sum_d1(app, 1.0), 1e-12);
    }
}

TEST(prob_ab, detector_two_from_its_own_paths) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 50; ++rep) {
        Apparatus app{random_splitter(rng), random_splitter(rng), 1.0, 2 * std::numbers::pi * u(rng)};
        Complex phase = std::polar(1.0, 2 * std::numbers::pi * u(rng));
        Complex amp = app.bs1.t * app.bs2.t_prime * std::exp(I * app.theta) * phase + app.bs1.r * app.bs2.r;
        EXPECT_NEAR(prob_ab(app, phase).p_d2, std::norm(amp), 1e-12);
    }
}

TEST(path_coefficients, reproduce_probabilities) {
    Apparatus app = Apparatus::paper_example();
    PathCoefficients d1 = path_coefficients(app, Detector::D1);
    PathCoefficients d2 = path_coefficients(app, Detector::D2);
    EXPECT_NEAR(std::norm(d1.ccw + d1.cw), 0.9, 1e-12);
    EXPECT_NEAR(std::norm(d2.ccw + d2.cw), 0.1, 1e-12);
    EXPECT_NEAR(std::norm(-d1.ccw + d1.cw), 0.1, 1e-12);
}

TEST(prob_na, table_rows) {
    Apparatus app = Apparatus::paper_example();
    DetectorDistribution half = prob_na(app, 0.0);
    EXPECT_NEAR(half.p_d1, 0.5, 1e-12);
    DetectorDistribution plus = prob_na(app, 1.0);
    EXPECT_NEAR(plus.p_d1, 0.9, 1e-12);
    DetectorDistribution minus = prob_na(app, -1.0);
    EXPECT_NEAR(minus.p_d1, 0.1, 1e-12);
    DetectorDistribution kappa = prob_na(app, -0.5);
    EXPECT_NEAR(kappa.p_d1, 0.3, 1e-12);
    EXPECT_NEAR(kappa.p_d2, 0.7, 1e-12);
    try {
        prob_na(app, 1.1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ExpectationOutOfDisk);
    }
}

TEST(prob_na, affine_in_expectation) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 100; ++rep) {
        Apparatus app{random_splitter(rng), random_splitter(rng), u(rng), 2 * std::numbers::pi * u(rng)};
        Complex a = std::polar(u(rng), 2 * std::numbers::pi * u(rng));
        Complex b = std::polar(u(rng), 2 * std::numbers::pi * u(rng));
        double w = u(rng);
        double lhs = prob_na(app, w * a + (1 - w) * b).p_d1;
        double rhs = w * prob_na(app, a).p_d1 + (1 - w) * prob_na(app, b).p_d1;
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(decompose_na, explicit_monodromy_rows) {
    Apparatus app = Apparatus::paper_example();
    SpectralDecomposition spec = spectral_decompose(explicit_r2());
    const double h = 1 / std::numbers::sqrt2;
    // |+>|1> mixes both eigenspaces equally; |+>|2> lies in +1; |-> |2> in -1.
    struct Row {
        ComplexVector psi;
        double plus_weight;
        double p_d1;
    };
    std::vector<Row> rows{
        {{1, 0, 0, 0, 0, 0}, 0.25, 0.3},
        {{0, 1, 0, 0, 0, 0}, 1.0, 0.9},
        {{0, 0, 0, 0, 1, 0}, 0.0, 0.1},
        {{0, h, 0, 0, h, 0}, 0.5, 0.5},
    };
    for (const Row &row : rows) {
        std::vector<SpectralBranch> branches = decompose_na(app, spec, row.psi);
        ASSERT_EQ(branches.size(), 2u);
        double total = 0;
        double mixture = 0;
        for (const auto &b : branches) {
            total += b.weight;
            mixture += b.weight * b.distribution.p_d1;
            if (std::abs(b.eigenvalue - 1.0) < 1e-9) {
                EXPECT_NEAR(b.weight, row.plus_weight, 1e-12);
                EXPECT_NEAR(b.distribution.p_d1, 0.9, 1e-12);
            } else {
                EXPECT_NEAR(b.distribution.p_d1, 0.1, 1e-12);
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_NEAR(mixture, row.p_d1, 1e-12);
        Complex z = expectation(explicit_r2(), row.psi);
        EXPECT_NEAR(prob_na(app, z).p_d1, mixture, 1e-12);
    }
    EXPECT_THROW(decompose_na(app, spec, ComplexVector(3)), Error);
}
