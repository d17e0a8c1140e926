#pragma once

#include "rmgd/solver.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace rmgd {

/// f(x) = 1/2 x^T A x - x^T b evaluated as 1/2 x^T (g - b); consumes no
/// matvec because g is already cached.
double fvalue(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
              const Eigen::VectorXd& b);

/// ||g_k||^2_{A^(2l-1)} from the cached vectors: v[l-1].v[l] for integer
/// l >= 1, v[m].v[m] for l = m + 1/2, and 2 (f - f*) for l = 0 when the gap
/// is known (absent otherwise).
std::optional<double> weighted_gnorm_sq(const SolverState& state,
                                        std::optional<double> fgap = std::nullopt);

/// (x - x*)^T A^(2l+1) (x - x*) by explicit powering (oracle scale only);
/// equals ||g||^2_{A^(2l-1)} at the same iterate.
double distance_norm_sq(const Eigen::VectorXd& x, const Eigen::VectorXd& xstar,
                        const Eigen::MatrixXd& A, int two_ell);

/// Max over j of ||v[j] - A^j (A x - b)|| / (1 + ||A^j (A x - b)||) against
/// an explicit dense power chain. Detects recursion drift.
double oracle_compare(const SolverState& state, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& b);

/// Residuals of the two per-step identities for one transition:
/// the conjugacy identity y_{k+1}^T y_k = (1 - omega) ||y_k||_2^2 and the
/// exact contraction ||g_{k+1}||^2_w = (1 - omega(2-omega)/L_k) ||g_k||^2_w.
struct StepIdentityReport {
    std::int64_t k = 0;
    double omega = 0.0;
    /// |y_{k+1}^T y_k - (1-omega)||y_k||^2| / (||y_k|| (||y_k|| + ||y_{k+1}||)).
    double conjugacy_resid_rel = 0.0;
    /// |w_after - predicted * w_before| / w_before; absent when the
    /// A^(2l-1)-norm is not formable (l = 0 without a known f*).
    std::optional<double> contraction_resid_rel;
    std::optional<double> contraction_predicted;
    std::optional<double> contraction_measured;
    /// Kantorovich quotient L_k; the omega = 1 contraction equals 1 - 1/L_k.
    std::optional<double> quotient_L;
};

/// `before` and `after` must be consecutive states of the same run and
/// omega the relaxation value used for the transition. For l = 0 the
/// function-value gaps at both iterates are needed to form the weighted
/// norm.
StepIdentityReport identity_checks(const SolverState& before, const SolverState& after,
                                   double omega,
                                   std::optional<double> fgap_before = std::nullopt,
                                   std::optional<double> fgap_after = std::nullopt);

/// Instrumented walk of a full run that evaluates identity_checks at every
/// step. Mirrors solve()'s iteration order (including random relaxation
/// draws) without recording a trace.
std::vector<StepIdentityReport> run_identity_checks(const SpdOperator& op,
                                                    const Eigen::VectorXd& b,
                                                    const Eigen::VectorXd& x0,
                                                    const SolverConfig& config,
                                                    std::optional<double> fstar,
                                                    std::int64_t max_steps);

} // namespace rmgd
