#include "rmgd/operators.hpp"

#include "rmgd/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmgd {

SpdOperator::SpdOperator(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) {
        throw std::invalid_argument("SpdOperator: dimension must be positive");
    }
}

Eigen::VectorXd SpdOperator::apply(const Eigen::VectorXd& v, Charge charge) const {
    Eigen::VectorXd out(dim_);
    apply_into(v, out, charge);
    return out;
}

void SpdOperator::apply_into(const Eigen::VectorXd& v, Eigen::VectorXd& out,
                             Charge charge) const {
    if (v.size() != dim_) {
        throw std::invalid_argument("SpdOperator::apply: dimension mismatch");
    }
    out.resize(dim_);
    apply_impl(v, out);
    if (charge == Charge::Algorithmic) {
        algorithmic_.fetch_add(1, std::memory_order_relaxed);
    } else {
        diagnostic_.fetch_add(1, std::memory_order_relaxed);
    }
}

MatvecCounters SpdOperator::counters() const {
    return {algorithmic_.load(std::memory_order_relaxed),
            diagnostic_.load(std::memory_order_relaxed)};
}

DenseOperator::DenseOperator(Eigen::MatrixXd matrix)
    : SpdOperator(matrix.rows()), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("DenseOperator: matrix must be square");
    }
    const double scale = matrix_.cwiseAbs().maxCoeff();
    const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("DenseOperator: matrix is not symmetric");
    }
}

void DenseOperator::apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out.noalias() = matrix_ * v;
}

DiagonalOperator::DiagonalOperator(Eigen::VectorXd diagonal)
    : SpdOperator(diagonal.size()), diagonal_(std::move(diagonal)) {
    if ((diagonal_.array() <= 0.0).any()) {
        throw std::invalid_argument("DiagonalOperator: diagonal entries must be positive");
    }
}

void DiagonalOperator::apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out = diagonal_.cwiseProduct(v);
}

CsrMatrix CsrMatrix::from_triplets(Eigen::Index rows, Eigen::Index cols,
                                   std::vector<Triplet> triplets) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("CsrMatrix: negative dimensions");
    }
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::invalid_argument("CsrMatrix: triplet index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    m.col_idx.reserve(triplets.size());
    m.values.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size();) {
        const std::int64_t r = triplets[i].row;
        const std::int64_t c = triplets[i].col;
        double sum = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
            sum += triplets[i].value;
            ++i;
        }
        m.col_idx.push_back(static_cast<std::int32_t>(c));
        m.values.push_back(sum);
        m.row_ptr[static_cast<std::size_t>(r) + 1] =
            static_cast<std::int64_t>(m.values.size());
    }
    // rows with no entries inherit the previous offset
    for (std::size_t r = 1; r < m.row_ptr.size(); ++r) {
        m.row_ptr[r] = std::max(m.row_ptr[r], m.row_ptr[r - 1]);
    }
    return m;
}

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
    if (x.size() != cols) {
        throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
    }
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            sum += values[static_cast<std::size_t>(p)] *
                   x[col_idx[static_cast<std::size_t>(p)]];
        }
        y[i] = sum;
    }
    return y;
}

Eigen::VectorXd CsrMatrix::multiply_transpose(const Eigen::VectorXd& x) const {
    if (x.size() != rows) {
        throw std::invalid_argument("CsrMatrix::multiply_transpose: dimension mismatch");
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double xi = x[i];
        for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            y[col_idx[static_cast<std::size_t>(p)]] +=
                values[static_cast<std::size_t>(p)] * xi;
        }
    }
    return y;
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<Triplet> triplets;
    triplets.reserve(values.size());
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            triplets.push_back({col_idx[static_cast<std::size_t>(p)], i,
                                values[static_cast<std::size_t>(p)]});
        }
    }
    return from_triplets(cols, rows, std::move(triplets));
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            d(i, col_idx[static_cast<std::size_t>(p)]) +=
                values[static_cast<std::size_t>(p)];
        }
    }
    return d;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
    if (rows != cols) {
        return false;
    }
    const CsrMatrix t = transpose();
    if (t.row_ptr != row_ptr || t.col_idx != col_idx) {
        return false;
    }
    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i] - t.values[i]) > rel_tol * std::max(1.0, scale)) {
            return false;
        }
    }
    return true;
}

CsrOperator::CsrOperator(CsrMatrix matrix)
    : SpdOperator(matrix.rows), matrix_(std::move(matrix)) {
    if (matrix_.rows != matrix_.cols) {
        throw std::invalid_argument("CsrOperator: matrix must be square");
    }
    if (!matrix_.is_symmetric()) {
        throw std::invalid_argument("CsrOperator: matrix is not symmetric");
    }
}

void CsrOperator::apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    out = matrix_.multiply(v);
}

Eigen::Index GramRidgeOperator::cols_of(
    const std::variant<CsrMatrix, Eigen::MatrixXd>& m) {
    return std::holds_alternative<CsrMatrix>(m) ? std::get<CsrMatrix>(m).cols
                                                : std::get<Eigen::MatrixXd>(m).cols();
}

GramRidgeOperator::GramRidgeOperator(CsrMatrix data, double ridge, double scale)
    : SpdOperator(data.cols), data_(std::move(data)), ridge_(ridge), scale_(scale) {
    if (ridge < 0.0 || !(scale > 0.0)) {
        throw std::invalid_argument("GramRidgeOperator: need ridge >= 0 and scale > 0");
    }
}

GramRidgeOperator::GramRidgeOperator(Eigen::MatrixXd data, double ridge, double scale)
    : SpdOperator(data.cols()), data_(std::move(data)), ridge_(ridge), scale_(scale) {
    if (ridge < 0.0 || !(scale > 0.0)) {
        throw std::invalid_argument("GramRidgeOperator: need ridge >= 0 and scale > 0");
    }
}

void GramRidgeOperator::apply_impl(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
    if (std::holds_alternative<CsrMatrix>(data_)) {
        const CsrMatrix& B = std::get<CsrMatrix>(data_);
        out = B.multiply_transpose(B.multiply(v));
    } else {
        const Eigen::MatrixXd& B = std::get<Eigen::MatrixXd>(data_);
        out.noalias() = B.transpose() * (B * v);
    }
    if (ridge_ != 0.0) {
        out += ridge_ * v;
    }
    if (scale_ != 1.0) {
        out *= scale_;
    }
}

namespace {

// Power iteration for the dominant Rayleigh quotient of the map `mult`.
// Runs the full budget (the stopping metric is far looser than the
// estimation error, so stopping early would cost accuracy) and reports
// whether the final relative change was below 1e-6.
template <typename Mult>
std::pair<double, bool> power_iterate(Eigen::VectorXd v, int iters, Mult&& mult) {
    v.normalize();
    double estimate = 0.0;
    bool settled = false;
    for (int i = 0; i < iters; ++i) {
        const Eigen::VectorXd w = mult(v);
        const double quotient = v.dot(w);
        const double change =
            std::abs(quotient - estimate) / std::max(1.0, std::abs(quotient));
        estimate = quotient;
        settled = (i > 0 && change < 1e-6);
        const double norm = w.norm();
        if (norm == 0.0) {
            break;
        }
        v = w / norm;
    }
    return {estimate, settled};
}

} // namespace

SpectralEstimate extreme_eigen_estimate(const SpdOperator& op, int iters,
                                        std::uint64_t seed) {
    if (iters < 1) {
        throw std::invalid_argument("extreme_eigen_estimate: iters must be positive");
    }
    Rng rng(seed);
    const Eigen::VectorXd v0 = random_vector(op.dim(), rng);

    const auto [lambda_max, max_settled] = power_iterate(
        v0, iters, [&](const Eigen::VectorXd& v) { return op.apply(v, Charge::Diagnostic); });

    // Shifted second pass: the dominant eigenvalue of sigma I - A is
    // sigma - lambda_min, and Rayleigh quotients keep the estimate inside
    // [lambda_min, lambda_max].
    const double sigma = 1.01 * lambda_max;
    const Eigen::VectorXd v1 = random_vector(op.dim(), rng);
    const auto [shifted, min_settled] =
        power_iterate(v1, iters, [&](const Eigen::VectorXd& v) {
            Eigen::VectorXd w = op.apply(v, Charge::Diagnostic);
            w = sigma * v - w;
            return w;
        });
    const double lambda_min = sigma - shifted;

    SpectralEstimate est;
    est.bounds = SpectralBounds::estimated(lambda_max, lambda_min);
    est.low_confidence = !(max_settled && min_settled);
    return est;
}

} // namespace rmgd
