#include "rmgd/problems.hpp"

#include "rmgd/errors.hpp"
#include "rmgd/numeric_text.hpp"
#include "rmgd/random.hpp"

#include <Eigen/Cholesky>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace rmgd {

double ProblemInstance::solution_residual() const {
    if (!xstar) {
        return 0.0;
    }
    return (op->apply(*xstar, Charge::Diagnostic) - b).norm();
}

ProblemInstance fletcher_counterexample() {
    ProblemInstance p;
    Eigen::VectorXd diag(2);
    diag << 20.0, 2.0;
    p.op = std::make_shared<DiagonalOperator>(diag);
    p.b = Eigen::VectorXd::Zero(2);
    p.x0 = Eigen::VectorXd(2);
    p.x0 << 0.1, 1.0;
    p.xstar = Eigen::VectorXd::Zero(2);
    p.fstar = 0.0;
    p.spectrum = SpectralBounds::exact(20.0, 2.0);
    p.label = "fletcher";
    p.fstar_source = "generator";
    return p;
}

Eigen::Vector2d worst_case_start(int two_ell) {
    switch (two_ell) {
        case 0: return {0.1, 1.0};
        case 1: return {1.0 / (10.0 * std::sqrt(10.0)), 1.0};
        case 2: return {0.01, 1.0};
        default:
            throw std::invalid_argument(
                "worst_case_start: only two_ell in {0, 1, 2} is supported");
    }
}

ProblemInstance diagonal_spectrum(int n, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("diagonal_spectrum: n must be >= 2");
    }
    Rng rng(seed);
    ProblemInstance p;
    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = static_cast<double>(i + 1);
    }
    p.op = std::make_shared<DiagonalOperator>(std::move(diag));
    p.b = Eigen::VectorXd::Zero(n);
    p.x0 = random_vector(n, rng);
    p.xstar = Eigen::VectorXd::Zero(n);
    p.fstar = 0.0;
    p.spectrum = SpectralBounds::exact(static_cast<double>(n), 1.0);
    p.label = "diag_n" + std::to_string(n);
    p.fstar_source = "generator";
    return p;
}

ProblemInstance dense_random(int m, int n, std::uint64_t seed) {
    if (!(m > n) || n < 2) {
        throw std::invalid_argument("dense_random: need m > n >= 2");
    }
    Rng rng(seed);
    // draw order: B row-major, then x*, then x0
    Eigen::MatrixXd B(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            B(i, j) = uniform01(rng);
        }
    }
    const Eigen::VectorXd xstar = random_vector(n, rng);
    const Eigen::VectorXd x0 = random_vector(n, rng);

    ProblemInstance p;
    if (n <= 2000) {
        Eigen::MatrixXd A = B.transpose() * B;
        A = 0.5 * (A + A.transpose()).eval();  // GEMM output is not bit-symmetric
        p.op = std::make_shared<DenseOperator>(std::move(A));
    } else {
        p.op = std::make_shared<GramRidgeOperator>(std::move(B), 0.0);
    }
    p.b = p.op->apply(xstar, Charge::Diagnostic);
    p.x0 = x0;
    p.xstar = xstar;
    p.fstar = -0.5 * xstar.dot(p.b);
    p.label = "dense_m" + std::to_string(m) + "_n" + std::to_string(n);
    p.fstar_source = "generator";
    return p;
}

ProblemInstance sparse_random(int n, int nnz_per_row, std::uint64_t seed) {
    if (n < 2 || nnz_per_row < 1 || nnz_per_row > n) {
        throw std::invalid_argument("sparse_random: need n >= 2 and 1 <= nnz_per_row <= n");
    }
    Rng rng(seed);

    // C: exactly nnz_per_row entries per row at distinct columns.
    std::vector<CsrMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * nnz_per_row * 2 + n);
    std::unordered_set<std::int64_t> used;
    for (int i = 0; i < n; ++i) {
        used.clear();
        for (int e = 0; e < nnz_per_row; ++e) {
            std::int64_t col;
            do {
                col = std::min<std::int64_t>(
                    static_cast<std::int64_t>(uniform01(rng) * n), n - 1);
            } while (!used.insert(col).second);
            triplets.push_back({i, col, uniform01(rng)});
        }
    }
    // B = C + C^T
    const std::size_t c_entries = triplets.size();
    for (std::size_t t = 0; t < c_entries; ++t) {
        triplets.push_back({triplets[t].col, triplets[t].row, triplets[t].value});
    }
    CsrMatrix Bmat = CsrMatrix::from_triplets(n, n, triplets);

    // A = B + diag(B e + z): strictly diagonally dominant, hence PD.
    Eigen::VectorXd row_sums = Bmat.multiply(Eigen::VectorXd::Ones(n));
    triplets.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::int64_t ptr = Bmat.row_ptr[i]; ptr < Bmat.row_ptr[i + 1]; ++ptr) {
            triplets.push_back({i, Bmat.col_idx[static_cast<std::size_t>(ptr)],
                                Bmat.values[static_cast<std::size_t>(ptr)]});
        }
    }
    for (int i = 0; i < n; ++i) {
        triplets.push_back({i, i, row_sums[i] + uniform_open(rng, 0.0, 1000.0)});
    }
    const Eigen::VectorXd xstar = random_vector(n, rng);
    const Eigen::VectorXd x0 = random_vector(n, rng);

    ProblemInstance p;
    p.op = std::make_shared<CsrOperator>(
        CsrMatrix::from_triplets(n, n, std::move(triplets)));
    p.b = p.op->apply(xstar, Charge::Diagnostic);
    p.x0 = x0;
    p.xstar = xstar;
    p.fstar = -0.5 * xstar.dot(p.b);
    p.label = "sparse_n" + std::to_string(n);
    p.fstar_source = "generator";
    return p;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& msg) {
    throw parse_error(name + ":" + std::to_string(line) + ": " + msg);
}

} // namespace

LabeledSparseData parse_libsvm(std::istream& in, const std::string& name) {
    std::vector<CsrMatrix::Triplet> triplets;
    std::vector<double> labels;
    Eigen::Index max_col = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto tok = split_ws(line);
        if (tok.empty()) {
            continue;  // blank line, not a record
        }
        const auto label = parse_double(tok[0]);
        if (!label) {
            fail(name, lineno, "malformed label '" + std::string(tok[0]) + "'");
        }
        const std::int64_t row = static_cast<std::int64_t>(labels.size());
        std::int64_t prev_index = 0;
        for (std::size_t t = 1; t < tok.size(); ++t) {
            const auto colon = tok[t].find(':');
            if (colon == std::string_view::npos) {
                fail(name, lineno, "expected 'index:value', got '" + std::string(tok[t]) + "'");
            }
            const auto idx = parse_int(tok[t].substr(0, colon));
            const auto val = parse_double(tok[t].substr(colon + 1));
            if (!idx || !val) {
                fail(name, lineno, "malformed feature '" + std::string(tok[t]) + "'");
            }
            if (*idx < 1) {
                fail(name, lineno, "feature index must be >= 1");
            }
            if (*idx == prev_index) {
                fail(name, lineno, "duplicate feature index " + std::to_string(*idx));
            }
            if (*idx < prev_index) {
                fail(name, lineno, "feature indices must be ascending");
            }
            prev_index = *idx;
            triplets.push_back({row, *idx - 1, *val});
            max_col = std::max<Eigen::Index>(max_col, *idx);
        }
        labels.push_back(*label);
    }
    LabeledSparseData data;
    data.features = CsrMatrix::from_triplets(
        static_cast<Eigen::Index>(labels.size()), max_col, std::move(triplets));
    data.labels = Eigen::Map<const Eigen::VectorXd>(labels.data(),
                                                    static_cast<Eigen::Index>(labels.size()));
    return data;
}

LabeledSparseData parse_libsvm(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open '" + path.string() + "'");
    }
    return parse_libsvm(in, path.string());
}

void write_libsvm(std::ostream& out, const LabeledSparseData& data) {
    const CsrMatrix& B = data.features;
    for (Eigen::Index i = 0; i < B.rows; ++i) {
        out << format_double(data.labels[i]);
        for (std::int64_t p = B.row_ptr[i]; p < B.row_ptr[i + 1]; ++p) {
            out << ' ' << (B.col_idx[static_cast<std::size_t>(p)] + 1) << ':'
                << format_double(B.values[static_cast<std::size_t>(p)]);
        }
        out << "\n";
    }
}

void write_libsvm(const std::filesystem::path& path, const LabeledSparseData& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw parse_error("cannot open '" + path.string() + "' for writing");
    }
    write_libsvm(out, data);
}

ProblemInstance regularized_ls(const LabeledSparseData& data, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("regularized_ls: lambda must be nonnegative");
    }
    const CsrMatrix& B = data.features;
    if (B.rows != data.labels.size()) {
        throw std::invalid_argument("regularized_ls: label count does not match rows");
    }
    const Eigen::Index n = B.cols;

    ProblemInstance p;
    p.b = 2.0 * B.multiply_transpose(data.labels);
    p.x0 = Eigen::VectorXd::Zero(n);
    p.label = "ls_m" + std::to_string(B.rows) + "_n" + std::to_string(n);

    if (n <= 2000) {
        const Eigen::MatrixXd Bd = B.to_dense();
        Eigen::MatrixXd M = Bd.transpose() * Bd;
        M.diagonal().array() += lambda;
        const Eigen::LLT<Eigen::MatrixXd> llt(M);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument(
                "regularized_ls: B^T B + lambda I is not positive definite "
                "(rank-deficient data with lambda = 0?)");
        }
        p.xstar = llt.solve(0.5 * p.b);
        p.fstar = -0.5 * p.xstar->dot(p.b);
        p.fstar_source = "normal_equations";
    }
    p.op = std::make_shared<GramRidgeOperator>(B, lambda, 2.0);
    return p;
}

} // namespace rmgd
