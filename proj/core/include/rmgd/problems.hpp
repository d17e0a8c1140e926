#pragma once

#include "rmgd/operators.hpp"
#include "rmgd/theory.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace rmgd {

/// Operator, right-hand side and start point, plus whatever ground truth the
/// generator can supply (solution, optimal value, exact spectrum).
struct ProblemInstance {
    std::shared_ptr<SpdOperator> op;
    Eigen::VectorXd b;
    Eigen::VectorXd x0;
    std::optional<Eigen::VectorXd> xstar;
    std::optional<double> fstar;
    std::optional<SpectralBounds> spectrum;
    std::string label;
    /// Provenance of fstar: "generator" (b built as A x*), "normal_equations",
    /// or empty when absent.
    std::string fstar_source;

    /// ||A x* - b|| (one diagnostic matvec); 0 when x* is unknown.
    double solution_residual() const;
};

/// The 2-d ill-conditioned quadratic with A = diag(20, 2), b = 0 and
/// x0 = (1/10, 1): the start point weights both eigendirections equally, so
/// the unrelaxed l = 0 member attains its worst-case rate every step.
ProblemInstance fletcher_counterexample();

/// Start points that equalize the extreme eigencomponents of y0 = A^l g0 on
/// the counterexample: (1/10, 1) for l = 0, (1/(10 sqrt 10), 1) for l = 1/2,
/// (1/100, 1) for l = 1. Other values of l are unsupported.
Eigen::Vector2d worst_case_start(int two_ell);

/// A = diag(1..n), b = 0 (so x* = 0, f* = 0, kappa = n exactly), x0 uniform
/// on [0,1) from the seed.
ProblemInstance diagonal_spectrum(int n, std::uint64_t seed);

/// A = B^T B for a dense uniform-[0,1) B of shape m x n (m > n); x* random,
/// b = A x*. The Gram matrix is materialized densely for n <= 2000 and kept
/// in factor form above that.
ProblemInstance dense_random(int m, int n, std::uint64_t seed);

/// Sparse diagonally dominant construction: C has exactly nnz_per_row
/// uniform entries per row at distinct random columns, B = C + C^T,
/// A = B + diag(B e + z) with z uniform on (0, 1000); x* random, b = A x*.
ProblemInstance sparse_random(int n, int nnz_per_row, std::uint64_t seed);

/// Rectangular feature matrix with one label per row.
struct LabeledSparseData {
    CsrMatrix features;      // m x n
    Eigen::VectorXd labels;  // m
};

/// LIBSVM line format: `<label> <index>:<value> ...` with 1-based strictly
/// ascending indices and optional '#' comments. Label-only lines are valid
/// all-zero rows; blank lines are skipped. Malformed tokens, non-ascending
/// or duplicate indices, and indices < 1 raise parse_error with the line
/// number.
LabeledSparseData parse_libsvm(const std::filesystem::path& path);
LabeledSparseData parse_libsvm(std::istream& in, const std::string& name);

void write_libsvm(const std::filesystem::path& path, const LabeledSparseData& data);
void write_libsvm(std::ostream& out, const LabeledSparseData& data);

/// Ridge-regularized least squares min ||Bx - d||^2 + lambda ||x||^2 mapped
/// onto the quadratic model with A = 2(B^T B + lambda I) and b = 2 B^T d, so
/// reported f equals the regression objective minus ||d||^2. x* and f* come
/// from a dense normal-equations solve when n <= 2000. x0 is zero; callers
/// that want random starts draw their own.
ProblemInstance regularized_ls(const LabeledSparseData& data, double lambda);

} // namespace rmgd
