#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmgd/diagnostics.hpp"
#include "rmgd/problems.hpp"
#include "rmgd/solver.hpp"
#include "support.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace rmgd;

namespace {

SolverConfig config_for(int two_ell, double omega, std::int64_t max_iter,
                        double tol = 1e-300) {
    SolverConfig c;
    c.two_ell = two_ell;
    c.relaxation = RelaxationMode::fixed(omega);
    c.tol_gnorm_sq = tol;
    c.max_iter = max_iter;
    return c;
}

} // namespace

TEST_CASE("init_state builds the power chain with floor(l)+2 matvecs") {
    const ProblemInstance p = fletcher_counterexample();

    SUBCASE("two_ell = 0: stores g0 and A g0") {
        const SolverState s = init_state(*p.op, p.b, p.x0, config_for(0, 1.0, 10));
        REQUIRE(s.v.size() == 2);
        CHECK(s.v[0](0) == doctest::Approx(2.0));
        CHECK(s.v[0](1) == doctest::Approx(2.0));
        CHECK(s.v[1](0) == doctest::Approx(40.0));
        CHECK(s.v[1](1) == doctest::Approx(4.0));
        CHECK(p.op->counters().algorithmic == 2);
        CHECK(s.k == 0);
    }

    SUBCASE("two_ell = 5: four vectors, four matvecs") {
        const SolverState s = init_state(*p.op, p.b, p.x0, config_for(5, 1.0, 10));
        CHECK(s.v.size() == 4);
        CHECK(p.op->counters().algorithmic == 4);
        // v[j] = A^j g0 on the diagonal problem
        CHECK(s.v[3](0) == doctest::Approx(2.0 * 20.0 * 20.0 * 20.0));
        CHECK(s.v[3](1) == doctest::Approx(2.0 * 2.0 * 2.0 * 2.0));
    }

    SUBCASE("dimension mismatch is an argument error") {
        CHECK_THROWS_AS(init_state(*p.op, Eigen::VectorXd::Zero(3), p.x0,
                                   config_for(0, 1.0, 10)),
                        std::invalid_argument);
    }
}

TEST_CASE("step_size reproduces the closed forms on the counterexample") {
    const ProblemInstance p = fletcher_counterexample();
    {
        const SolverState s = init_state(*p.op, p.b, p.x0, config_for(0, 1.0, 10));
        CHECK(step_size(s) == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    }
    {
        const SolverState s = init_state(*p.op, p.b, p.x0, config_for(1, 1.0, 10));
        CHECK(step_size(s) == doctest::Approx(88.0 / 1616.0).epsilon(1e-14));
    }
    {
        const SolverState s = init_state(*p.op, p.b, p.x0, config_for(2, 1.0, 10));
        CHECK(step_size(s) == doctest::Approx(1616.0 / 32032.0).epsilon(1e-14));
    }
}

TEST_CASE("step_size is 1 for the identity regardless of l") {
    DiagonalOperator op(Eigen::VectorXd::Ones(4));
    Rng rng(3);
    const Eigen::VectorXd x0 = random_vector(4, rng);
    for (int two_ell : {0, 1, 2, 3, 7}) {
        const SolverState s =
            init_state(op, Eigen::VectorXd::Zero(4), x0, config_for(two_ell, 1.0, 10));
        CHECK(step_size(s) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("step_size stays within the reciprocal spectrum") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4 + static_cast<int>(uniform01(rng) * 12);
        const double kappa = 1.0 + uniform01(rng) * 99.0;
        DenseOperator op(random_spd_matrix(n, kappa, rng));
        const Eigen::VectorXd x0 = random_vector(n, rng);
        const int two_ell = static_cast<int>(uniform01(rng) * 6.0);
        SolverState s =
            init_state(op, Eigen::VectorXd::Zero(n), x0, config_for(two_ell, 1.0, 10));
        for (int k = 0; k < 5; ++k) {
            const double alpha = step_size(s);
            CHECK(alpha >= 1.0 / kappa * (1.0 - 1e-12));
            CHECK(alpha <= 1.0 * (1.0 + 1e-12));
            step(s, op, 1.0);
        }
    }
}

TEST_CASE("non-SPD operator surfaces as numerical breakdown") {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 0.0, 0.0, -1.0;  // symmetric, indefinite
    DenseOperator op(A);
    Eigen::VectorXd x0(2);
    x0 << 1.0, 1.0;
    const SolveResult r =
        solve(op, Eigen::VectorXd::Zero(2), x0, config_for(1, 1.0, 10));
    CHECK(r.status == SolveStatus::NumericalBreakdown);
}

TEST_CASE("first two function values match the published table") {
    const ProblemInstance p = fletcher_counterexample();
    // frozen from the explicit-power reference iteration
    struct Row {
        int two_ell;
        double f1, f2;
    };
    const Row rows[] = {{0, 0.7363636364, 0.4929376409},
                        {1, 0.7948338398, 0.1768723655},
                        {2, 0.8083905106, 0.0059526342}};
    for (const Row& row : rows) {
        const ProblemInstance q = fletcher_counterexample();
        const SolveResult r = solve(*q.op, q.b, q.x0, config_for(row.two_ell, 1.0, 2),
                                    q.fstar);
        REQUIRE(r.trace.records.size() == 3);
        CHECK(r.trace.records[0].fval == doctest::Approx(1.1).epsilon(1e-12));
        CHECK(r.trace.records[1].fval == doctest::Approx(row.f1).epsilon(5e-10));
        CHECK(r.trace.records[2].fval == doctest::Approx(row.f2).epsilon(5e-9));
        CHECK(r.status == SolveStatus::MaxIterReached);
    }
}

TEST_CASE("solver path equals the explicit-power reference run") {
    Rng rng(23);
    for (int two_ell : {0, 1, 2, 3, 4, 5}) {
        const Eigen::MatrixXd A = random_spd_matrix(8, 30.0, rng);
        const Eigen::VectorXd xs = random_vector(8, rng);
        const Eigen::VectorXd b = A * xs;
        const Eigen::VectorXd x0 = random_vector(8, rng);
        const std::vector<double> omegas(20, 0.95);

        const testsupport::ReferenceRun ref = testsupport::reference_run(A, b, x0, two_ell, omegas);

        DenseOperator op(A);
        SolverState s = init_state(op, b, x0, config_for(two_ell, 0.95, 100));
        for (std::size_t k = 0; k < omegas.size(); ++k) {
            CHECK(step_size(s) == doctest::Approx(ref.alphas[k]).epsilon(1e-9));
            step(s, op, omegas[k]);
            CHECK((s.x - ref.iterates[k + 1]).norm() <=
                  1e-9 * (1.0 + ref.iterates[k + 1].norm()));
        }
    }
}

TEST_CASE("one matvec per iteration for every family member") {
    Rng rng(5);
    const Eigen::MatrixXd A = random_spd_matrix(12, 40.0, rng);
    const Eigen::VectorXd x0 = random_vector(12, rng);
    for (int two_ell = 0; two_ell <= 8; ++two_ell) {
        DenseOperator op(A);
        SolverState s =
            init_state(op, Eigen::VectorXd::Zero(12), x0, config_for(two_ell, 0.95, 100));
        const std::uint64_t after_init = op.counters().algorithmic;
        CHECK(after_init == static_cast<std::uint64_t>(two_ell / 2 + 2));
        for (int k = 1; k <= 25; ++k) {
            step(s, op, 0.95);
            CHECK(op.counters().algorithmic == after_init + static_cast<std::uint64_t>(k));
        }
        CHECK(op.counters().diagnostic == 0);
    }
}

TEST_CASE("cached vectors track explicit powers over the live phase") {
    // Bare recursion horizon: short chains (two_ell <= 3) stay at the
    // roundoff floor for 50 steps at kappa = 20. Longer chains drift
    // (measured; see the restart cases below).
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXd A = random_spd_matrix(10, 20.0, rng);
        const Eigen::VectorXd xs = random_vector(10, rng);
        const Eigen::VectorXd b = A * xs;
        const Eigen::VectorXd x0 = random_vector(10, rng);
        for (int two_ell : {0, 1, 2, 3}) {
            DenseOperator op(A);
            SolverState s = init_state(op, b, x0, config_for(two_ell, 1.0, 100));
            const double g0 = s.gnorm_sq();
            CHECK(oracle_compare(s, A, b) <= 1e-12);
            for (int k = 0; k < 50; ++k) {
                if (s.gnorm_sq() <= 1e-16 * g0) {
                    break;
                }
                step(s, op, 1.0);
                CHECK(oracle_compare(s, A, b) <= 1e-8);
            }
        }
    }
}

TEST_CASE("periodic restarts arrest drift for long chains") {
    // two_ell = 6 amplifies roundoff through the cached-vector feedback
    // loop; recomputing the chain every 10 steps keeps it at oracle level
    // even at kappa = 100.
    Rng rng(57);
    const Eigen::MatrixXd A = random_spd_matrix(10, 100.0, rng);
    const Eigen::VectorXd b = A * random_vector(10, rng);
    const Eigen::VectorXd x0 = random_vector(10, rng);

    DenseOperator bare_op(A);
    SolverState bare = init_state(bare_op, b, x0, config_for(6, 1.0, 100));
    double bare_drift = 0.0;
    for (int k = 1; k <= 50; ++k) {
        step(bare, bare_op, 1.0);
        bare_drift = std::max(bare_drift, oracle_compare(bare, A, b));
    }

    DenseOperator op(A);
    SolverState s = init_state(op, b, x0, config_for(6, 1.0, 100));
    double mitigated_drift = 0.0;
    for (int k = 1; k <= 50; ++k) {
        if ((k - 1) > 0 && (k - 1) % 10 == 0) {
            restart(s, op, b);
        }
        step(s, op, 1.0);
        mitigated_drift = std::max(mitigated_drift, oracle_compare(s, A, b));
    }
    CHECK(mitigated_drift <= 1e-8);
    CHECK(mitigated_drift < bare_drift);
}

TEST_CASE("restart recomputes drifted vectors exactly") {
    const ProblemInstance p = fletcher_counterexample();
    SolverState s = init_state(*p.op, p.b, p.x0, config_for(2, 1.0, 10));
    step(s, *p.op, 1.0);
    const Eigen::VectorXd v1_clean = s.v[1];
    s.v[1](0) += 1e-3;  // inject drift
    CHECK(oracle_compare(s, testsupport::fletcher_dense(), p.b) >= 1e-4);
    restart(s, *p.op, p.b);
    CHECK(oracle_compare(s, testsupport::fletcher_dense(), p.b) <= 1e-13);
    CHECK((s.v[1] - v1_clean).norm() <= 1e-13 * (1.0 + v1_clean.norm()));
}

TEST_CASE("restart immediately after init is idempotent and doubles the charge") {
    const ProblemInstance p = fletcher_counterexample();
    SolverState s = init_state(*p.op, p.b, p.x0, config_for(3, 1.0, 10));
    const SolverState before = s;
    CHECK(p.op->counters().algorithmic == 3);
    restart(s, *p.op, p.b);
    CHECK(p.op->counters().algorithmic == 6);
    CHECK(s.k == before.k);
    for (std::size_t j = 0; j < s.v.size(); ++j) {
        CHECK((s.v[j] - before.v[j]).norm() == 0.0);
    }
}

TEST_CASE("periodic restarts leave the iterate path unchanged") {
    // well-conditioned so 200 unrelaxed steps stay numerically tame
    Rng rng(77);
    Eigen::VectorXd diag(10);
    for (int i = 0; i < 10; ++i) {
        diag[i] = 1.0 + 99.0 * static_cast<double>(i) / 9.0;
    }
    DiagonalOperator op_a(diag);
    DiagonalOperator op_b(diag);
    const Eigen::VectorXd x0 = random_vector(10, rng);
    const Eigen::VectorXd b = Eigen::VectorXd::Zero(10);

    SolverConfig with_q = config_for(1, 1.0, 200, 1e-26);
    with_q.restart_period = 50;
    const SolveResult rq = solve(op_a, b, x0, with_q, 0.0);
    const SolveResult rn = solve(op_b, b, x0, config_for(1, 1.0, 200, 1e-26), 0.0);

    REQUIRE(rq.trace.records.size() == rn.trace.records.size());
    for (std::size_t i = 0; i < rq.trace.records.size(); ++i) {
        CHECK(rq.trace.records[i].fval ==
              doctest::Approx(rn.trace.records[i].fval).epsilon(1e-6));
        CHECK(std::abs(rq.trace.records[i].gnorm2_sq - rn.trace.records[i].gnorm2_sq) <=
              1e-6 * (1.0 + rn.trace.records[i].gnorm2_sq));
    }
    CHECK(rq.restarts > 0);
    // matvec accounting: (fl+2)(1 + restarts) + iterations
    const std::uint64_t expected =
        static_cast<std::uint64_t>((with_q.floor_ell() + 2) * (1 + rq.restarts) +
                                   rq.iterations);
    CHECK(op_a.counters().algorithmic == expected);
}

TEST_CASE("start at the optimum converges immediately") {
    const ProblemInstance p = fletcher_counterexample();
    SolverConfig c = config_for(2, 1.0, 10, 1e-20);
    const SolveResult r = solve(*p.op, p.b, *p.xstar, c, p.fstar);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.iterations == 0);
    REQUIRE(r.trace.records.size() == 1);
    CHECK(r.trace.records[0].gnorm2_sq == 0.0);
}

TEST_CASE("identity problem converges in one step for any l") {
    DiagonalOperator op(Eigen::VectorXd::Ones(6));
    Rng rng(9);
    const Eigen::VectorXd x0 = random_vector(6, rng);
    for (int two_ell : {0, 1, 2, 5}) {
        DiagonalOperator fresh(Eigen::VectorXd::Ones(6));
        const SolveResult r = solve(fresh, Eigen::VectorXd::Zero(6), x0,
                                    config_for(two_ell, 1.0, 10, 1e-24));
        CHECK(r.status == SolveStatus::Converged);
        CHECK(r.iterations == 1);
        CHECK(r.x_final.norm() <= 1e-12);
    }
}

TEST_CASE("conjugacy of consecutive y vectors") {
    // omega = 1 makes consecutive y's orthogonal; otherwise
    // y_{k+1}^T y_k = (1 - omega) ||y_k||^2
    Rng rng(13);
    const Eigen::MatrixXd A = random_spd_matrix(9, 25.0, rng);
    const Eigen::VectorXd x0 = random_vector(9, rng);
    const Eigen::VectorXd b = Eigen::VectorXd::Zero(9);
    for (int two_ell : {0, 1, 2, 3}) {
        for (double omega : {1.0, 0.95, 0.5, 1.5}) {
            DenseOperator op(A);
            SolverConfig c = config_for(two_ell, omega, 30);
            const auto reports = run_identity_checks(op, b, x0, c, 0.0, 30);
            for (const auto& rep : reports) {
                CHECK(rep.conjugacy_resid_rel <= 1e-8);
            }
        }
    }
}

TEST_CASE("weighted gradient norm decreases monotonically for omega in (0,2)") {
    Rng rng(29);
    const Eigen::MatrixXd A = random_spd_matrix(10, 60.0, rng);
    const Eigen::VectorXd x0 = random_vector(10, rng);
    const Eigen::VectorXd b = Eigen::VectorXd::Zero(10);
    for (int two_ell : {1, 2, 3, 4}) {
        for (double omega : {0.5, 0.95, 1.0, 1.5, 1.9}) {
            DenseOperator op(A);
            SolverState s = init_state(op, b, x0, config_for(two_ell, omega, 100));
            const double g0 = s.gnorm_sq();
            double prev = *weighted_gnorm_sq(s);
            for (int k = 0; k < 60; ++k) {
                if (s.gnorm_sq() <= 1e-16 * g0) {
                    break;
                }
                step(s, op, omega);
                const double cur = *weighted_gnorm_sq(s);
                CHECK(cur <= prev * (1.0 + 1e-10));
                prev = cur;
            }
        }
    }
}

TEST_CASE("per-step contraction identity holds to eight digits") {
    Rng rng(41);
    const Eigen::MatrixXd A = random_spd_matrix(8, 45.0, rng);
    const Eigen::VectorXd x0 = random_vector(8, rng);
    const Eigen::VectorXd b = Eigen::VectorXd::Zero(8);
    for (int two_ell : {0, 1, 2, 3}) {
        for (double omega : {0.5, 0.95, 1.0, 1.5}) {
            DenseOperator op(A);
            SolverConfig c = config_for(two_ell, omega, 40);
            c.restart_period = 10;  // keeps integer-l cross products drift-free
            const auto reports = run_identity_checks(op, b, x0, c, 0.0, 40);
            CHECK(!reports.empty());
            for (const auto& rep : reports) {
                REQUIRE(rep.contraction_resid_rel.has_value());
                CHECK(*rep.contraction_resid_rel <= 1e-8);
            }
        }
    }
}

TEST_CASE("random relaxation is reproducible and in range") {
    const ProblemInstance p = diagonal_spectrum(50, 4);
    SolverConfig c;
    c.two_ell = 1;
    c.relaxation = RelaxationMode::random_uniform(99);
    c.tol_gnorm_sq = 1e-10;
    c.max_iter = 200;
    const SolveResult r1 = solve(*p.op, p.b, p.x0, c, p.fstar);
    const ProblemInstance q = diagonal_spectrum(50, 4);
    const SolveResult r2 = solve(*q.op, q.b, q.x0, c, q.fstar);
    REQUIRE(r1.trace.records.size() == r2.trace.records.size());
    for (std::size_t i = 0; i < r1.trace.records.size(); ++i) {
        CHECK(r1.trace.records[i].fval == r2.trace.records[i].fval);
        const double w = r1.trace.records[i].omega;
        CHECK(w >= 0.0);
        CHECK(w < 2.0);
    }
}

TEST_CASE("solve accounting matches the init + per-step formula") {
    for (int two_ell : {0, 1, 2, 3, 4, 5, 6}) {
        const ProblemInstance p = diagonal_spectrum(30, 8);
        SolverConfig c = config_for(two_ell, 0.95, 40);
        const SolveResult r = solve(*p.op, p.b, p.x0, c, p.fstar);
        CHECK(r.iterations == 40);
        CHECK(p.op->counters().algorithmic ==
              static_cast<std::uint64_t>(two_ell / 2 + 2 + 40));
    }
}
