#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace rmgd {

/// Fixed relaxation omega in (0, 2), or a fresh uniform draw from (0, 2)
/// at every iteration (seeded, endpoints rejected).
class RelaxationMode {
public:
    static RelaxationMode fixed(double omega) {
        if (!(omega > 0.0 && omega < 2.0)) {
            throw std::invalid_argument("RelaxationMode: omega must lie in (0, 2)");
        }
        RelaxationMode m;
        m.random_ = false;
        m.omega_ = omega;
        return m;
    }

    static RelaxationMode random_uniform(std::uint64_t seed) {
        RelaxationMode m;
        m.random_ = true;
        m.seed_ = seed;
        return m;
    }

    bool is_random() const { return random_; }
    double fixed_omega() const { return omega_; }
    std::uint64_t seed() const { return seed_; }

private:
    bool random_ = false;
    double omega_ = 1.0;
    std::uint64_t seed_ = 0;
};

struct SolverConfig {
    /// The family parameter stored as the integer 2*l, so l may be
    /// 0, 1/2, 1, 3/2, ...; all index arithmetic stays exact.
    int two_ell = 0;
    RelaxationMode relaxation = RelaxationMode::fixed(1.0);
    /// Stopping threshold on ||g_k||_2^2.
    double tol_gnorm_sq = 1e-8;
    std::int64_t max_iter = 1000;
    /// When set, all cached vectors are recomputed from scratch every q
    /// iterations to arrest floating-point drift.
    std::optional<std::int64_t> restart_period;
    /// Record every stride-th iteration (first and last are always kept).
    std::int64_t trace_stride = 1;

    int floor_ell() const { return two_ell / 2; }
    /// Number of cached vectors: floor(l) + 2.
    int num_vectors() const { return floor_ell() + 2; }

    void validate() const {
        if (two_ell < 0) {
            throw std::invalid_argument("SolverConfig: two_ell must be nonnegative");
        }
        if (!(tol_gnorm_sq > 0.0)) {
            throw std::invalid_argument("SolverConfig: tol_gnorm_sq must be positive");
        }
        if (max_iter < 1) {
            throw std::invalid_argument("SolverConfig: max_iter must be positive");
        }
        if (restart_period && *restart_period < 1) {
            throw std::invalid_argument("SolverConfig: restart period must be >= 1");
        }
        if (trace_stride < 1) {
            throw std::invalid_argument("SolverConfig: trace_stride must be >= 1");
        }
    }
};

} // namespace rmgd
