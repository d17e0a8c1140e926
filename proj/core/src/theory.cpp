#include "rmgd/theory.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmgd {

namespace {

void check_bounds(const SpectralBounds& b) {
    if (!(b.lambda_min > 0.0) || !(b.lambda_min <= b.lambda_max) ||
        !std::isfinite(b.lambda_max)) {
        throw std::invalid_argument("SpectralBounds: need 0 < lambda_min <= lambda_max");
    }
}

void check_omega(double omega) {
    if (!(omega > 0.0 && omega < 2.0)) {
        throw std::invalid_argument("relaxation parameter must lie in (0, 2)");
    }
}

void check_two_ell(int two_ell) {
    if (two_ell < 0) {
        throw std::invalid_argument("two_ell must be nonnegative");
    }
}

} // namespace

SpectralBounds SpectralBounds::exact(double lambda_max, double lambda_min) {
    SpectralBounds b{lambda_max, lambda_min, lambda_max / lambda_min, Source::Exact};
    check_bounds(b);
    return b;
}

SpectralBounds SpectralBounds::estimated(double lambda_max, double lambda_min) {
    SpectralBounds b{lambda_max, lambda_min, lambda_max / lambda_min, Source::Estimated};
    check_bounds(b);
    return b;
}

double contraction_factor(double omega, const SpectralBounds& bounds) {
    check_omega(omega);
    check_bounds(bounds);
    const double l1 = bounds.lambda_max;
    const double ln = bounds.lambda_min;
    return 1.0 - omega * (2.0 - omega) * 4.0 * l1 * ln / ((l1 + ln) * (l1 + ln));
}

double kantorovich_bound(const SpectralBounds& bounds) {
    check_bounds(bounds);
    const double l1 = bounds.lambda_max;
    const double ln = bounds.lambda_min;
    return (l1 + ln) * (l1 + ln) / (4.0 * l1 * ln);
}

RateReport make_rate_report(double omega, int two_ell, const SpectralBounds& bounds) {
    check_two_ell(two_ell);
    RateReport r;
    r.c_omega = contraction_factor(omega, bounds);
    r.kantorovich = kantorovich_bound(bounds);
    r.rate1_factor = 1.0 - omega * (2.0 - omega) / bounds.kappa;
    r.rate2_prefactor = std::pow(bounds.kappa, two_ell);
    return r;
}

double rate1_fgap_bound(std::int64_t k, double omega, const SpectralBounds& bounds,
                        double f0gap) {
    check_omega(omega);
    check_bounds(bounds);
    if (k < 0 || f0gap < 0.0) {
        throw std::invalid_argument("rate1_fgap_bound: need k >= 0 and f0gap >= 0");
    }
    const double factor = 1.0 - omega * (2.0 - omega) / bounds.kappa;
    return std::pow(factor, static_cast<double>(k)) * f0gap;
}

double rate2_fgap_bound(std::int64_t k, double omega, int two_ell,
                        const SpectralBounds& bounds, double f0gap) {
    check_omega(omega);
    check_bounds(bounds);
    check_two_ell(two_ell);
    const double c = contraction_factor(omega, bounds);
    return std::pow(bounds.kappa, two_ell) * std::pow(c, static_cast<double>(k)) * f0gap;
}

double gnorm2_bound(std::int64_t k, double omega, int two_ell,
                    const SpectralBounds& bounds, double g0norm_sq) {
    check_omega(omega);
    check_bounds(bounds);
    check_two_ell(two_ell);
    const double kappa = bounds.kappa;
    const double c = contraction_factor(omega, bounds);
    const double rate1 =
        kappa * std::pow(1.0 - omega * (2.0 - omega) / kappa, static_cast<double>(k));
    const double prefactor = (two_ell == 0) ? kappa : std::pow(kappa, two_ell - 1);
    const double rate2 = prefactor * std::pow(c, static_cast<double>(k));
    return std::min(rate1, rate2) * g0norm_sq;
}

double iteration_bound_rate1(double eps, double omega, const SpectralBounds& bounds,
                             double f0gap) {
    check_omega(omega);
    check_bounds(bounds);
    if (!(eps > 0.0) || !(f0gap > 0.0)) {
        throw std::invalid_argument("iteration_bound_rate1: need eps > 0 and f0gap > 0");
    }
    if (eps >= f0gap) {
        return 0.0;
    }
    return bounds.kappa / (omega * (2.0 - omega)) * std::log(f0gap / eps);
}

double iteration_bound_rate2(double eps, double omega, int two_ell,
                             const SpectralBounds& bounds, double f0gap) {
    check_omega(omega);
    check_bounds(bounds);
    check_two_ell(two_ell);
    if (!(eps > 0.0) || !(f0gap > 0.0)) {
        throw std::invalid_argument("iteration_bound_rate2: need eps > 0 and f0gap > 0");
    }
    // log argument kappa^(2l) * f0gap / eps evaluated in log space so large
    // two_ell cannot overflow.
    const double log_arg =
        two_ell * std::log(bounds.kappa) + std::log(f0gap) - std::log(eps);
    if (log_arg <= 0.0) {
        return 0.0;
    }
    const double kappa = bounds.kappa;
    const double prefactor = (kappa + 1.0) * (kappa + 1.0) / (4.0 * kappa);
    return prefactor / (omega * (2.0 - omega)) * log_arg;
}

double gradient_oscillation_bound(const SpectralBounds& bounds) {
    check_bounds(bounds);
    const double kappa = bounds.kappa;
    return (kappa - 1.0) * (kappa - 1.0) / (4.0 * kappa);
}

double kantorovich_quotient(double y2, double yA, double yAinv) {
    if (!(y2 > 0.0) || !(yA > 0.0) || !(yAinv > 0.0)) {
        throw std::invalid_argument("kantorovich_quotient: inputs must be positive");
    }
    return yA * yAinv / (y2 * y2);
}

Eigen::VectorXd apply_power(const Eigen::MatrixXd& A, Eigen::VectorXd v, int p) {
    for (int i = 0; i < p; ++i) {
        v = A * v;
    }
    return v;
}

double kantorovich_slack(const Eigen::MatrixXd& B, const Eigen::VectorXd& x) {
    if (B.rows() != B.cols() || B.rows() != x.size()) {
        throw std::invalid_argument("kantorovich_slack: dimension mismatch");
    }
    if (x.isZero(0.0)) {
        throw std::invalid_argument("kantorovich_slack: x must be nonzero");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    if (es.info() != Eigen::Success) {
        throw std::invalid_argument("kantorovich_slack: eigendecomposition failed");
    }
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(B.rows() - 1);
    if (!(lmin > 0.0)) {
        throw std::invalid_argument("kantorovich_slack: B is singular or indefinite");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("kantorovich_slack: Cholesky factorization failed");
    }
    const double xBx = x.dot(B * x);
    const double xBinvx = x.dot(llt.solve(x));
    const double x2 = x.squaredNorm();
    const double ratio = xBx * xBinvx / (x2 * x2);
    const double bound = (lmax + lmin) * (lmax + lmin) / (4.0 * lmax * lmin);
    return bound - ratio;
}

double stepsize_rayleigh_product(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                                 int two_ell) {
    check_two_ell(two_ell);
    if (A.rows() != A.cols() || A.rows() != g.size()) {
        throw std::invalid_argument("stepsize_rayleigh_product: dimension mismatch");
    }
    const Eigen::VectorXd w = apply_power(A, g, two_ell);
    const double p2l = g.dot(w);
    const double p2l1 = g.dot(A * w);
    const double s0 = g.squaredNorm();
    const double s1 = g.dot(A * g);
    return (p2l / p2l1) * (s1 / s0);
}

std::pair<double, double> power_norm_sandwich(const Eigen::MatrixXd& A,
                                              const Eigen::VectorXd& z, int two_ell) {
    check_two_ell(two_ell);
    if (A.rows() != A.cols() || A.rows() != z.size()) {
        throw std::invalid_argument("power_norm_sandwich: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(A.rows() - 1);
    const double zAz = z.dot(A * z);
    const double zApz = z.dot(apply_power(A, z, two_ell + 1));
    const double lower = zApz - std::pow(lmin, two_ell) * zAz;
    const double upper = std::pow(lmax, two_ell) * zAz - zApz;
    return {lower, upper};
}

Eigen::MatrixXd random_spd_matrix(int n, double kappa, Rng& rng) {
    if (n < 1 || !(kappa >= 1.0)) {
        throw std::invalid_argument("random_spd_matrix: need n >= 1 and kappa >= 1");
    }
    Eigen::VectorXd evals(n);
    evals(0) = 1.0;
    if (n > 1) {
        evals(n - 1) = kappa;
    }
    const double log_kappa = std::log(kappa);
    for (int i = 1; i + 1 < n; ++i) {
        evals(i) = std::exp(uniform01(rng) * log_kappa);
    }
    std::sort(evals.data(), evals.data() + n);

    Eigen::MatrixXd G(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            G(i, j) = standard_normal(rng);
        }
    }
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::MatrixXd A = Q * evals.asDiagonal() * Q.transpose();
    A = 0.5 * (A + A.transpose()).eval();
    return A;
}

} // namespace rmgd
