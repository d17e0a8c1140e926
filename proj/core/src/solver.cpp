#include "rmgd/solver.hpp"

#include "rmgd/diagnostics.hpp"
#include "rmgd/errors.hpp"
#include "rmgd/random.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace rmgd {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::MaxIterReached: return "MaxIterReached";
        case SolveStatus::NumericalBreakdown: return "NumericalBreakdown";
    }
    return "unknown";
}

double SolverState::power_product(int p) const {
    assert(p >= 0);
    const int a = p / 2;
    const int b = p - a;
    assert(b < static_cast<int>(v.size()));
    return v[static_cast<std::size_t>(a)].dot(v[static_cast<std::size_t>(b)]);
}

namespace {

// g_k = A x_k - b followed by the power chain; floor(l) + 2 matvecs.
void refresh_vectors(SolverState& s, const SpdOperator& op, const Eigen::VectorXd& b) {
    s.v[0] = op.apply(s.x, Charge::Algorithmic) - b;
    for (std::size_t j = 1; j < s.v.size(); ++j) {
        op.apply_into(s.v[j - 1], s.v[j], Charge::Algorithmic);
    }
}

} // namespace

SolverState init_state(const SpdOperator& op, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& x0, const SolverConfig& config) {
    config.validate();
    if (b.size() != op.dim() || x0.size() != op.dim()) {
        throw std::invalid_argument("init_state: dimension mismatch");
    }
    SolverState s;
    s.two_ell = config.two_ell;
    s.x = x0;
    s.v.resize(static_cast<std::size_t>(config.num_vectors()));
    s.k = 0;
    refresh_vectors(s, op, b);
    return s;
}

double step_size(const SolverState& state) {
    const double num = state.power_product(state.two_ell);
    const double den = state.power_product(state.two_ell + 1);
    if (state.v[0].isZero(0.0)) {
        return 0.0;  // already converged; caller should not step
    }
    if (!(num > 0.0) || !(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) {
        throw numerical_breakdown(
            "step_size: non-positive or non-finite curvature (operator not SPD, "
            "or cached vectors have drifted)");
    }
    return num / den;
}

void step_with_alpha(SolverState& s, const SpdOperator& op, double omega_k,
                     double alpha) {
    if (!(omega_k > 0.0 && omega_k < 2.0)) {
        throw std::invalid_argument("step: omega must lie in (0, 2)");
    }
    const double scaled = omega_k * alpha;
    const int jmax = s.floor_ell();
    s.x.noalias() -= scaled * s.v[0];
    // Ascending order: each v[j] consumes the not-yet-updated v[j+1], so the
    // update is g_{k+1} = (I - omega alpha A) g_k applied to every power.
    for (int j = 0; j <= jmax; ++j) {
        s.v[static_cast<std::size_t>(j)] -= scaled * s.v[static_cast<std::size_t>(j) + 1];
    }
    // the single matvec of the iteration, on the freshly updated vector
    op.apply_into(s.v[static_cast<std::size_t>(jmax)],
                  s.v[static_cast<std::size_t>(jmax) + 1], Charge::Algorithmic);
    ++s.k;
    s.last_alpha = alpha;
    s.last_omega = omega_k;
}

void step(SolverState& state, const SpdOperator& op, double omega_k) {
    step_with_alpha(state, op, omega_k, step_size(state));
}

void restart(SolverState& state, const SpdOperator& op, const Eigen::VectorXd& b) {
    if (b.size() != op.dim() || state.x.size() != op.dim()) {
        throw std::invalid_argument("restart: dimension mismatch");
    }
    refresh_vectors(state, op, b);
}

SolveResult solve(const SpdOperator& op, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& x0, const SolverConfig& config,
                  std::optional<double> fstar) {
    SolverState s = init_state(op, b, x0, config);
    Rng relax_rng(config.relaxation.seed());

    SolveResult result;
    result.trace.config = config;

    std::int64_t last_recorded = -1;
    const auto record = [&](double alpha, double omega) {
        TraceRecord r;
        r.k = s.k;
        r.fval = fvalue(s.x, s.v[0], b);
        if (fstar) {
            r.fgap = r.fval - *fstar;
        }
        r.gnorm2_sq = s.gnorm_sq();
        r.gnorm_w_sq = weighted_gnorm_sq(s, r.fgap);
        r.alpha = alpha;
        r.omega = omega;
        const MatvecCounters c = op.counters();
        r.matvecs_alg = c.algorithmic;
        r.matvecs_diag = c.diagnostic;
        result.trace.records.push_back(r);
        last_recorded = s.k;
    };
    const auto record_terminal = [&] {
        if (last_recorded != s.k) {
            record(0.0, 0.0);
        }
    };

    for (;;) {
        if (s.gnorm_sq() <= config.tol_gnorm_sq) {
            record_terminal();
            result.status = SolveStatus::Converged;
            break;
        }
        if (s.k >= config.max_iter) {
            record_terminal();
            result.status = SolveStatus::MaxIterReached;
            break;
        }
        if (config.restart_period && s.k > 0 && s.k % *config.restart_period == 0) {
            restart(s, op, b);
            ++result.restarts;
        }
        const double omega = config.relaxation.is_random()
                                 ? uniform_open(relax_rng, 0.0, 2.0)
                                 : config.relaxation.fixed_omega();
        double alpha = 0.0;
        try {
            alpha = step_size(s);
        } catch (const numerical_breakdown&) {
            record_terminal();
            result.status = SolveStatus::NumericalBreakdown;
            break;
        }
        if (s.k % config.trace_stride == 0) {
            record(alpha, omega);
        }
        step_with_alpha(s, op, omega, alpha);
    }

    result.iterations = s.k;
    result.x_final = std::move(s.x);
    return result;
}

} // namespace rmgd
