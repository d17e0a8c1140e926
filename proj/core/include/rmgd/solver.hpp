#pragma once

#include "rmgd/config.hpp"
#include "rmgd/operators.hpp"
#include "rmgd/trace.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace rmgd {

/// Iterate plus the cached power vectors v[j] = A^j g_k for
/// j = 0..floor(l)+1. Every quantity the iteration needs (step size,
/// gradient norms in even powers of A) is a dot product of two cached
/// vectors, which is what makes one matvec per step sufficient.
struct SolverState {
    Eigen::VectorXd x;
    std::vector<Eigen::VectorXd> v;
    std::int64_t k = 0;
    double last_alpha = 0.0;
    double last_omega = 0.0;
    int two_ell = 0;

    int floor_ell() const { return two_ell / 2; }

    /// g^T A^p g formed from the cache as v[p/2] . v[p - p/2];
    /// valid for 0 <= p <= 2 * (floor(l) + 1).
    double power_product(int p) const;

    double gnorm_sq() const { return v[0].squaredNorm(); }
};

enum class SolveStatus { Converged, MaxIterReached, NumericalBreakdown };

struct SolveResult {
    SolveStatus status = SolveStatus::MaxIterReached;
    std::int64_t iterations = 0;
    Eigen::VectorXd x_final;
    Trace trace;
    std::int64_t restarts = 0;
};

const char* to_string(SolveStatus status);

/// Computes g0 = A x0 - b and the power chain v[j] = A v[j-1]; consumes
/// exactly floor(l) + 2 algorithmic matvecs.
SolverState init_state(const SpdOperator& op, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x0, const SolverConfig& config);

/// alpha_k = (v[fl(l)] . v[fl(l+1/2)]) / (v[fl(l+1/2)] . v[fl(l+1)]), the
/// minimizer of ||grad f(x_k - a g_k)||_{A^(2l-1)}. Consumes no matvec and
/// satisfies 1/lambda_max <= alpha_k <= 1/lambda_min. Returns 0 when the
/// gradient is exactly zero; throws numerical_breakdown when the denominator
/// is non-positive or non-finite.
double step_size(const SolverState& state);

/// One relaxed iteration: x <- x - omega alpha v[0]; v[j] <- v[j] -
/// omega alpha v[j+1] for j = 0..floor(l) (so v[j] stays A^j g of the new
/// iterate); then the single matvec v[floor(l)+1] = A v[floor(l)].
void step(SolverState& state, const SpdOperator& op, double omega_k);

/// step() with a precomputed step size (avoids recomputing it when the
/// caller already needed alpha for telemetry).
void step_with_alpha(SolverState& state, const SpdOperator& op, double omega_k,
                     double alpha);

/// Recomputes g_k and the whole power chain from scratch at the current
/// iterate (floor(l) + 2 algorithmic matvecs); k is unchanged.
void restart(SolverState& state, const SpdOperator& op, const Eigen::VectorXd& b);

/// Full iteration loop: stops when ||g||_2^2 <= tol or k = max_iter,
/// restarting every q iterations when configured, recording a trace row per
/// (strided) iteration. Algorithmic matvec total is exactly
/// (floor(l)+2) + iterations + (floor(l)+2) * restarts.
SolveResult solve(const SpdOperator& op, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& x0, const SolverConfig& config,
                  std::optional<double> fstar = std::nullopt);

} // namespace rmgd
