#pragma once

#include "rmgd/theory.hpp"

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace rmgd {

/// Which ledger an operator application is charged to. Solver work goes to
/// the algorithmic counter; instrumentation, eigenvalue estimation and
/// consistency checks go to the diagnostic counter, so the one-matvec-per-
/// iteration property stays assertable as an exact integer.
enum class Charge { Algorithmic, Diagnostic };

struct MatvecCounters {
    std::uint64_t algorithmic = 0;
    std::uint64_t diagnostic = 0;
};

/// Symmetric positive definite linear map accessed only through apply().
/// Immutable after construction except for the counters, which are atomic so
/// concurrent experiment runs can share an instance safely.
class SpdOperator {
public:
    virtual ~SpdOperator() = default;

    SpdOperator(const SpdOperator&) = delete;
    SpdOperator& operator=(const SpdOperator&) = delete;

    Eigen::Index dim() const { return dim_; }

    /// A * v, charging the selected counter by exactly one.
    Eigen::VectorXd apply(const Eigen::VectorXd& v, Charge charge) const;

    /// Same, writing into an existing vector (out must not alias v).
    void apply_into(const Eigen::VectorXd& v, Eigen::VectorXd& out, Charge charge) const;

    MatvecCounters counters() const;

protected:
    explicit SpdOperator(Eigen::Index dim);
    virtual void apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const = 0;

private:
    Eigen::Index dim_;
    mutable std::atomic<std::uint64_t> algorithmic_{0};
    mutable std::atomic<std::uint64_t> diagnostic_{0};
};

/// Dense symmetric backend. The constructor rejects non-square or visibly
/// asymmetric input; positive definiteness is an assumption probed by tests.
class DenseOperator final : public SpdOperator {
public:
    explicit DenseOperator(Eigen::MatrixXd matrix);
    const Eigen::MatrixXd& matrix() const { return matrix_; }

private:
    void apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    Eigen::MatrixXd matrix_;
};

class DiagonalOperator final : public SpdOperator {
public:
    explicit DiagonalOperator(Eigen::VectorXd diagonal);
    const Eigen::VectorXd& diagonal() const { return diagonal_; }

private:
    void apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    Eigen::VectorXd diagonal_;
};

/// Compressed sparse row storage with sorted column indices. Symmetric
/// matrices are stored with both triangles so the matvec is branch-free.
struct CsrMatrix {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<std::int64_t> row_ptr;  // size rows + 1
    std::vector<std::int32_t> col_idx;  // sorted within each row
    std::vector<double> values;

    struct Triplet {
        std::int64_t row;
        std::int64_t col;
        double value;
    };

    /// Builds CSR from (row, col, value) entries; duplicates are summed.
    static CsrMatrix from_triplets(Eigen::Index rows, Eigen::Index cols,
                                   std::vector<Triplet> triplets);

    std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& x) const;
    CsrMatrix transpose() const;
    Eigen::MatrixXd to_dense() const;
    bool is_symmetric(double rel_tol = 1e-10) const;
};

class CsrOperator final : public SpdOperator {
public:
    /// Requires a square, symmetric matrix (both triangles present).
    explicit CsrOperator(CsrMatrix matrix);
    const CsrMatrix& matrix() const { return matrix_; }

private:
    void apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    CsrMatrix matrix_;
};

/// x -> scale * (B^T (B x) + ridge x) applied in factor form; B^T B is never
/// materialized. B may be dense or sparse and rectangular (m x n); the
/// operator acts on R^n.
class GramRidgeOperator final : public SpdOperator {
public:
    GramRidgeOperator(CsrMatrix data, double ridge, double scale = 1.0);
    GramRidgeOperator(Eigen::MatrixXd data, double ridge, double scale = 1.0);

    double ridge() const { return ridge_; }
    double scale() const { return scale_; }

private:
    void apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const override;
    static Eigen::Index cols_of(const std::variant<CsrMatrix, Eigen::MatrixXd>& m);
    std::variant<CsrMatrix, Eigen::MatrixXd> data_;
    double ridge_;
    double scale_;
};

struct SpectralEstimate {
    SpectralBounds bounds;
    /// Set when the power-iteration ratio was still changing by more than
    /// 1e-6 relative after the allotted iterations.
    bool low_confidence = false;
};

/// Power iteration for lambda_max, then power iteration on (sigma I - A)
/// with sigma = 1.01 * lambda_max_est for lambda_min. Factorization-free;
/// all applications are charged to the diagnostic counter. The estimates
/// are Rayleigh quotients, so lambda_max_est <= lambda_max and
/// lambda_min_est >= lambda_min.
SpectralEstimate extreme_eigen_estimate(const SpdOperator& op, int iters,
                                        std::uint64_t seed);

} // namespace rmgd
