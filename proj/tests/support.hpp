#pragma once

// Shared helpers for the test suites. The reference iteration here is an
// independent oracle: it recomputes every quantity from explicit dense
// matrix powers each step and never uses the cached-vector recursion.

#include "rmgd/random.hpp"
#include "rmgd/theory.hpp"

#include <Eigen/Dense>

#include <vector>

namespace testsupport {

struct ReferenceRun {
    std::vector<Eigen::VectorXd> iterates;  // x_0 .. x_K
    std::vector<double> fvals;              // f(x_k)
    std::vector<double> alphas;             // alpha_k per step
};

// Relaxed l-MGD by the textbook formulas: alpha_k = g^T A^(2l) g / g^T
// A^(2l+1) g with powers formed by explicit multiplication.
inline ReferenceRun reference_run(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& x0, int two_ell,
                                  const std::vector<double>& omegas) {
    ReferenceRun run;
    Eigen::VectorXd x = x0;
    for (std::size_t k = 0; k <= omegas.size(); ++k) {
        const Eigen::VectorXd g = A * x - b;
        run.iterates.push_back(x);
        run.fvals.push_back(0.5 * x.dot(A * x) - x.dot(b));
        if (k == omegas.size()) {
            break;
        }
        const Eigen::VectorXd w = rmgd::apply_power(A, g, two_ell);
        const double alpha = g.dot(w) / g.dot(A * w);
        run.alphas.push_back(alpha);
        x -= omegas[k] * alpha * g;
    }
    return run;
}

inline Eigen::MatrixXd fletcher_dense() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = 20.0;
    A(1, 1) = 2.0;
    return A;
}

inline Eigen::VectorXd shifted_random_vector(Eigen::Index n, rmgd::Rng& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = 2.0 * rmgd::uniform01(rng) - 1.0;
    }
    return v;
}

} // namespace testsupport
