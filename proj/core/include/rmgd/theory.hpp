#pragma once

#include "rmgd/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>

namespace rmgd {

/// Extreme eigenvalues of the operator and their ratio. Every rate and
/// complexity formula takes these explicitly; nothing estimates eigenvalues
/// behind the caller's back. `source` records whether the values are exact
/// (known spectrum) or power-iteration estimates, so reports can label the
/// provenance of any bound they print.
struct SpectralBounds {
    double lambda_max = 1.0;
    double lambda_min = 1.0;
    double kappa = 1.0;
    enum class Source { Exact, Estimated };
    Source source = Source::Exact;

    static SpectralBounds exact(double lambda_max, double lambda_min);
    static SpectralBounds estimated(double lambda_max, double lambda_min);
};

struct RateReport {
    double c_omega = 0.0;          // contraction factor c(omega)
    double kantorovich = 1.0;      // (l1+ln)^2 / (4 l1 ln)
    double rate1_factor = 0.0;     // 1 - omega(2-omega)/kappa
    double rate2_prefactor = 1.0;  // kappa^(2l)
};

RateReport make_rate_report(double omega, int two_ell, const SpectralBounds& bounds);

/// c(omega) = 1 - omega(2-omega) * 4 l1 ln / (l1+ln)^2.  At omega = 1 this is
/// the classical Kantorovich rate ((kappa-1)/(kappa+1))^2.
double contraction_factor(double omega, const SpectralBounds& bounds);

/// (l1+ln)^2 / (4 l1 ln), the upper bound in the Kantorovich inequality.
double kantorovich_bound(const SpectralBounds& bounds);

/// Function-value gap bound after k steps: (1 - omega(2-omega)/kappa)^k * f0gap.
double rate1_fgap_bound(std::int64_t k, double omega, const SpectralBounds& bounds,
                        double f0gap);

/// Function-value gap bound after k steps: kappa^(2l) * c(omega)^k * f0gap.
double rate2_fgap_bound(std::int64_t k, double omega, int two_ell,
                        const SpectralBounds& bounds, double f0gap);

/// Squared gradient 2-norm bound: min of the rate-1 bound
/// kappa * (1 - omega(2-omega)/kappa)^k and the rate-2 bound
/// kappa * c^k (for l = 0) or kappa^(2l-1) * c^k (for l >= 1/2).
double gnorm2_bound(std::int64_t k, double omega, int two_ell,
                    const SpectralBounds& bounds, double g0norm_sq);

/// Iteration count guaranteeing fgap <= eps via the kappa-rate:
/// kappa/(omega(2-omega)) * ln(f0gap/eps); 0 when already satisfied.
double iteration_bound_rate1(double eps, double omega, const SpectralBounds& bounds,
                             double f0gap);

/// Iteration count guaranteeing fgap <= eps via the Kantorovich rate:
/// (kappa+1)^2/(4 kappa) / (omega(2-omega)) * ln(kappa^(2l) f0gap / eps);
/// 0 when the log argument is <= 1.
double iteration_bound_rate2(double eps, double omega, int two_ell,
                             const SpectralBounds& bounds, double f0gap);

/// (kappa-1)^2 / (4 kappa): cap on the one-step growth of ||g||^2 for the
/// unrelaxed l = 0 member.
double gradient_oscillation_bound(const SpectralBounds& bounds);

/// Kantorovich quotient L = yA * yAinv / y2^2 >= 1 formed from
/// y2 = ||y||_2^2, yA = ||y||_A^2, yAinv = ||y||_{A^-1}^2.  With omega = 1 the
/// per-step contraction of ||g||^2_{A^(2l-1)} equals exactly 1 - 1/L.
double kantorovich_quotient(double y2, double yA, double yAinv);

// --- dense oracle checks -------------------------------------------------
//
// These operate on small dense matrices with direct solves and
// eigendecompositions. They are verification oracles, not production paths.

/// Slack of the Kantorovich inequality for SPD B and nonzero x:
/// (l1+ln)^2/(4 l1 ln) - (x^T B x)(x^T B^-1 x)/||x||^4.  Nonnegative up to
/// roundoff.  Throws std::invalid_argument when B is singular or indefinite.
double kantorovich_slack(const Eigen::MatrixXd& B, const Eigen::VectorXd& x);

/// (g^T A^(2l) g / g^T A^(2l+1) g) * (g^T A g / g^T g); at most 1 for SPD A,
/// with equality at l = 0.
double stepsize_rayleigh_product(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                                 int two_ell);

/// Slacks of ln^(2l) z^T A z <= ||z||^2_{A^(2l+1)} <= l1^(2l) z^T A z,
/// returned as (lower, upper); both nonnegative up to roundoff.
std::pair<double, double> power_norm_sandwich(const Eigen::MatrixXd& A,
                                              const Eigen::VectorXd& z, int two_ell);

/// A^p v by repeated multiplication (p >= 0).
Eigen::VectorXd apply_power(const Eigen::MatrixXd& A, Eigen::VectorXd v, int p);

/// Random dense SPD matrix with extreme eigenvalues pinned to (kappa, 1) and
/// interior eigenvalues log-uniform between them. Used by property suites.
Eigen::MatrixXd random_spd_matrix(int n, double kappa, Rng& rng);

} // namespace rmgd
