#include "rmgd/diagnostics.hpp"

#include "rmgd/errors.hpp"
#include "rmgd/random.hpp"
#include "rmgd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmgd {

double fvalue(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
              const Eigen::VectorXd& b) {
    return 0.5 * x.dot(g - b);
}

std::optional<double> weighted_gnorm_sq(const SolverState& state,
                                        std::optional<double> fgap) {
    if (state.two_ell >= 1) {
        return state.power_product(state.two_ell - 1);
    }
    if (fgap) {
        return 2.0 * *fgap;  // ||g||^2_{A^-1} = 2 (f - f*)
    }
    return std::nullopt;
}

double distance_norm_sq(const Eigen::VectorXd& x, const Eigen::VectorXd& xstar,
                        const Eigen::MatrixXd& A, int two_ell) {
    if (x.size() != xstar.size() || x.size() != A.rows() || A.rows() != A.cols()) {
        throw std::invalid_argument("distance_norm_sq: dimension mismatch");
    }
    const Eigen::VectorXd d = x - xstar;
    return d.dot(apply_power(A, d, two_ell + 1));
}

double oracle_compare(const SolverState& state, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || A.rows() != state.x.size() || b.size() != A.rows()) {
        throw std::invalid_argument("oracle_compare: dimension mismatch");
    }
    Eigen::VectorXd w = A * state.x - b;
    double max_err = 0.0;
    for (std::size_t j = 0; j < state.v.size(); ++j) {
        const double err = (state.v[j] - w).norm() / (1.0 + w.norm());
        max_err = std::max(max_err, err);
        if (j + 1 < state.v.size()) {
            w = A * w;
        }
    }
    return max_err;
}

StepIdentityReport identity_checks(const SolverState& before, const SolverState& after,
                                   double omega, std::optional<double> fgap_before,
                                   std::optional<double> fgap_after) {
    if (before.two_ell != after.two_ell || after.k != before.k + 1) {
        throw std::invalid_argument("identity_checks: states are not consecutive");
    }
    const int two_ell = before.two_ell;
    const int fl = two_ell / 2;
    const int ce = (two_ell + 1) / 2;

    StepIdentityReport rep;
    rep.k = before.k;
    rep.omega = omega;

    // y_{k+1}^T y_k = g_{k+1}^T A^(2l) g_k assembled across the two caches.
    const double y2_before = before.power_product(two_ell);
    const double y2_after = after.power_product(two_ell);
    const double cross = after.v[static_cast<std::size_t>(fl)].dot(
        before.v[static_cast<std::size_t>(ce)]);
    const double expected = (1.0 - omega) * y2_before;
    const double scale =
        std::sqrt(std::max(y2_before, 0.0)) *
        (std::sqrt(std::max(y2_before, 0.0)) + std::sqrt(std::max(y2_after, 0.0)));
    rep.conjugacy_resid_rel =
        scale > 0.0 ? std::abs(cross - expected) / scale : 0.0;

    const std::optional<double> w_before = weighted_gnorm_sq(before, fgap_before);
    const std::optional<double> w_after = weighted_gnorm_sq(after, fgap_after);
    if (w_before && w_after && *w_before > 0.0) {
        const double yA = before.power_product(two_ell + 1);
        const double yAinv = *w_before;  // ||y||^2_{A^-1} = ||g||^2_{A^(2l-1)}
        const double L = kantorovich_quotient(y2_before, yA, yAinv);
        const double predicted = 1.0 - omega * (2.0 - omega) / L;
        rep.quotient_L = L;
        rep.contraction_predicted = predicted;
        rep.contraction_measured = *w_after / *w_before;
        rep.contraction_resid_rel =
            std::abs(*w_after - predicted * *w_before) / *w_before;
    }
    return rep;
}

std::vector<StepIdentityReport> run_identity_checks(const SpdOperator& op,
                                                    const Eigen::VectorXd& b,
                                                    const Eigen::VectorXd& x0,
                                                    const SolverConfig& config,
                                                    std::optional<double> fstar,
                                                    std::int64_t max_steps) {
    SolverState state = init_state(op, b, x0, config);
    Rng relax_rng(config.relaxation.seed());
    std::vector<StepIdentityReport> reports;
    for (std::int64_t i = 0; i < max_steps; ++i) {
        if (state.gnorm_sq() <= config.tol_gnorm_sq) {
            break;
        }
        if (config.restart_period && state.k > 0 &&
            state.k % *config.restart_period == 0) {
            restart(state, op, b);
        }
        const double omega = config.relaxation.is_random()
                                 ? uniform_open(relax_rng, 0.0, 2.0)
                                 : config.relaxation.fixed_omega();
        const SolverState before = state;
        std::optional<double> fgap_before;
        if (fstar) {
            fgap_before = fvalue(before.x, before.v[0], b) - *fstar;
        }
        step(state, op, omega);
        std::optional<double> fgap_after;
        if (fstar) {
            fgap_after = fvalue(state.x, state.v[0], b) - *fstar;
        }
        reports.push_back(
            identity_checks(before, state, omega, fgap_before, fgap_after));
    }
    return reports;
}

} // namespace rmgd
