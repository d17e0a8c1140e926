#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace rmgd {

/// Project-wide PRNG. All generators, experiments and property suites use
/// mt19937_64 with the mappings below so traces are reproducible bit-for-bit
/// across platforms (std::uniform_real_distribution is not portable).
using Rng = std::mt19937_64;

/// Uniform draw on [0, 1) using the top 53 bits of the generator output.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw on the open interval (lo, hi); exact endpoints are rejected.
inline double uniform_open(Rng& rng, double lo, double hi) {
    double u = uniform01(rng);
    while (u == 0.0) {
        u = uniform01(rng);
    }
    return lo + (hi - lo) * u;
}

/// Vector with entries uniform on [0, 1), drawn in index order.
inline Eigen::VectorXd random_vector(Eigen::Index n, Rng& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = uniform01(rng);
    }
    return v;
}

/// Standard normal via Box-Muller on uniform01 draws (two per pair).
inline double standard_normal(Rng& rng) {
    double u1 = uniform01(rng);
    while (u1 == 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace rmgd
