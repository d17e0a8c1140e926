#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmgd/operators.hpp"
#include "rmgd/random.hpp"
#include "support.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

using namespace rmgd;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

std::vector<std::unique_ptr<SpdOperator>> make_backends() {
    std::vector<std::unique_ptr<SpdOperator>> ops;

    Eigen::VectorXd diag(6);
    diag << 1.0, 2.5, 3.0, 7.0, 11.0, 20.0;
    ops.push_back(std::make_unique<DiagonalOperator>(diag));

    Rng rng(42);
    ops.push_back(std::make_unique<DenseOperator>(random_spd_matrix(6, 50.0, rng)));

    // tridiagonal SPD stored with both triangles
    std::vector<CsrMatrix::Triplet> trip;
    for (int i = 0; i < 6; ++i) {
        trip.push_back({i, i, 4.0});
        if (i > 0) {
            trip.push_back({i, i - 1, -1.0});
            trip.push_back({i - 1, i, -1.0});
        }
    }
    ops.push_back(std::make_unique<CsrOperator>(CsrMatrix::from_triplets(6, 6, trip)));

    Eigen::MatrixXd B(8, 6);
    Rng rng2(7);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 6; ++j) {
            B(i, j) = uniform01(rng2);
        }
    }
    ops.push_back(std::make_unique<GramRidgeOperator>(B, 0.3));
    return ops;
}

} // namespace

TEST_CASE("diagonal apply scales componentwise") {
    DiagonalOperator op(vec2(20.0, 2.0));
    const Eigen::VectorXd y = op.apply(vec2(2.0, 2.0), Charge::Algorithmic);
    CHECK(y(0) == doctest::Approx(40.0));
    CHECK(y(1) == doctest::Approx(4.0));
}

TEST_CASE("identity operator returns its input") {
    DiagonalOperator op(Eigen::VectorXd::Ones(5));
    Rng rng(1);
    const Eigen::VectorXd v = random_vector(5, rng);
    CHECK((op.apply(v, Charge::Algorithmic) - v).norm() == 0.0);
}

TEST_CASE("gram-plus-ridge matches hand expansion and materialized oracle") {
    Eigen::MatrixXd B(2, 2);
    B << 1.0, 0.0, 1.0, 1.0;
    GramRidgeOperator op(B, 0.5);
    const Eigen::VectorXd y = op.apply(vec2(1.0, 1.0), Charge::Algorithmic);
    CHECK(y(0) == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(y(1) == doctest::Approx(2.5).epsilon(1e-14));

    // materialized B^T B + ridge I oracle on random rectangular data
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 3 + static_cast<int>(uniform01(rng) * 47);
        const int n = 2 + static_cast<int>(uniform01(rng) * 40);
        Eigen::MatrixXd R(m, n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                R(i, j) = 2.0 * uniform01(rng) - 1.0;
            }
        }
        const double ridge = uniform01(rng);
        GramRidgeOperator gram(R, ridge);
        const Eigen::MatrixXd M =
            R.transpose() * R + ridge * Eigen::MatrixXd::Identity(n, n);
        const Eigen::VectorXd x = testsupport::shifted_random_vector(n, rng);
        const Eigen::VectorXd got = gram.apply(x, Charge::Diagnostic);
        const Eigen::VectorXd want = M * x;
        CHECK((got - want).norm() <= 1e-10 * (1.0 + want.norm()));
    }
}

TEST_CASE("gram-plus-ridge sparse and dense backends agree") {
    Rng rng(5);
    std::vector<CsrMatrix::Triplet> trip;
    Eigen::MatrixXd Bd = Eigen::MatrixXd::Zero(10, 7);
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 7; ++j) {
            if (uniform01(rng) < 0.4) {
                const double v = uniform01(rng);
                trip.push_back({i, j, v});
                Bd(i, j) = v;
            }
        }
    }
    GramRidgeOperator sparse(CsrMatrix::from_triplets(10, 7, trip), 0.25, 2.0);
    GramRidgeOperator dense(Bd, 0.25, 2.0);
    const Eigen::VectorXd x = random_vector(7, rng);
    CHECK((sparse.apply(x, Charge::Diagnostic) - dense.apply(x, Charge::Diagnostic))
              .norm() <= 1e-13);
}

TEST_CASE("apply rejects dimension mismatch") {
    DiagonalOperator op(vec2(1.0, 2.0));
    CHECK_THROWS_AS(op.apply(Eigen::VectorXd::Ones(3), Charge::Algorithmic),
                    std::invalid_argument);
}

TEST_CASE("counters start at zero and each apply increments exactly one") {
    DiagonalOperator op(vec2(1.0, 2.0));
    CHECK(op.counters().algorithmic == 0);
    CHECK(op.counters().diagnostic == 0);

    op.apply(vec2(1.0, 1.0), Charge::Algorithmic);
    CHECK(op.counters().algorithmic == 1);
    CHECK(op.counters().diagnostic == 0);

    op.apply(vec2(1.0, 1.0), Charge::Diagnostic);
    CHECK(op.counters().algorithmic == 1);
    CHECK(op.counters().diagnostic == 1);
}

TEST_CASE("linearity, symmetry and positivity probes on every backend") {
    for (const auto& op : make_backends()) {
        Rng rng(2024);
        const Eigen::Index n = op->dim();
        for (int probe = 0; probe < 100; ++probe) {
            const Eigen::VectorXd u = testsupport::shifted_random_vector(n, rng);
            const Eigen::VectorXd v = testsupport::shifted_random_vector(n, rng);
            const double a = 2.0 * uniform01(rng) - 1.0;
            const double b = 2.0 * uniform01(rng) - 1.0;

            const Eigen::VectorXd Au = op->apply(u, Charge::Diagnostic);
            const Eigen::VectorXd Av = op->apply(v, Charge::Diagnostic);
            const Eigen::VectorXd Aw = op->apply(a * u + b * v, Charge::Diagnostic);
            CHECK((Aw - a * Au - b * Av).norm() <=
                  1e-12 * (1.0 + Aw.norm() + Au.norm() + Av.norm()));

            const double uAv = u.dot(Av);
            const double vAu = v.dot(Au);
            CHECK(std::abs(uAv - vAu) <= 1e-10 * (1.0 + std::abs(uAv)));

            if (u.norm() > 0.0) {
                CHECK(u.dot(Au) > 0.0);
            }
        }
    }
}

TEST_CASE("rayleigh quotients stay inside the known spectrum") {
    Eigen::VectorXd diag(5);
    diag << 1.0, 2.0, 3.0, 4.0, 5.0;
    DiagonalOperator op(diag);
    Rng rng(3);
    for (int probe = 0; probe < 200; ++probe) {
        const Eigen::VectorXd v = testsupport::shifted_random_vector(5, rng);
        if (v.norm() == 0.0) {
            continue;
        }
        const double q = v.dot(op.apply(v, Charge::Diagnostic)) / v.squaredNorm();
        CHECK(q >= 1.0 - 1e-12);
        CHECK(q <= 5.0 + 1e-12);
    }
}

TEST_CASE("extreme eigenvalue estimation on a known diagonal") {
    Eigen::VectorXd diag(5);
    diag << 1.0, 2.0, 3.0, 4.0, 5.0;
    DiagonalOperator op(diag);
    const SpectralEstimate est = extreme_eigen_estimate(op, 500, 1);
    CHECK(est.bounds.lambda_max >= 4.999);
    CHECK(est.bounds.lambda_max <= 5.0 * (1.0 + 1e-12));
    CHECK(est.bounds.lambda_min >= 1.0 * (1.0 - 1e-12));
    CHECK(est.bounds.lambda_min <= 1.001);
    CHECK(est.bounds.source == SpectralBounds::Source::Estimated);
    CHECK(op.counters().algorithmic == 0);  // estimation is diagnostic-only
    CHECK(op.counters().diagnostic > 0);
}

TEST_CASE("extreme eigenvalue estimation of the identity is exact") {
    DiagonalOperator op(Eigen::VectorXd::Ones(4));
    const SpectralEstimate est = extreme_eigen_estimate(op, 10, 9);
    CHECK(est.bounds.lambda_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.bounds.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("condition number of diag(1..1000) estimated within 1%") {
    Eigen::VectorXd diag(1000);
    for (int i = 0; i < 1000; ++i) {
        diag[i] = static_cast<double>(i + 1);
    }
    DiagonalOperator op(diag);
    const SpectralEstimate est = extreme_eigen_estimate(op, 8000, 12);
    CHECK(est.bounds.kappa == doctest::Approx(1000.0).epsilon(0.01));
}

TEST_CASE("estimation with zero iterations is an argument error") {
    DiagonalOperator op(vec2(1.0, 2.0));
    CHECK_THROWS_AS(extreme_eigen_estimate(op, 0, 0), std::invalid_argument);
}

TEST_CASE("csr from_triplets sums duplicates and sorts columns") {
    std::vector<CsrMatrix::Triplet> trip = {
        {0, 1, 2.0}, {0, 0, 1.0}, {0, 1, 3.0}, {1, 0, 4.0}};
    const CsrMatrix m = CsrMatrix::from_triplets(2, 2, trip);
    CHECK(m.nnz() == 3);
    Eigen::MatrixXd d = m.to_dense();
    CHECK(d(0, 0) == 1.0);
    CHECK(d(0, 1) == 5.0);
    CHECK(d(1, 0) == 4.0);
    CHECK(d(1, 1) == 0.0);
}

TEST_CASE("csr operator rejects asymmetric input") {
    std::vector<CsrMatrix::Triplet> trip = {{0, 1, 1.0}};
    CHECK_THROWS_AS(CsrOperator(CsrMatrix::from_triplets(2, 2, trip)),
                    std::invalid_argument);
}

TEST_CASE("dense operator rejects asymmetric input") {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS([&] { DenseOperator op(A); }(), std::invalid_argument);
}

TEST_CASE("diagonal operator rejects non-positive entries") {
    CHECK_THROWS_AS(DiagonalOperator(vec2(1.0, -2.0)), std::invalid_argument);
    CHECK_THROWS_AS(DiagonalOperator(vec2(1.0, 0.0)), std::invalid_argument);
}
