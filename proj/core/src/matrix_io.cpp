#include "rmgd/matrix_io.hpp"

#include "rmgd/errors.hpp"
#include "rmgd/numeric_text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace rmgd {

namespace {

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& msg) {
    throw parse_error(name + ":" + std::to_string(line) + ": " + msg);
}

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

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

} // namespace

CsrMatrix read_matrix_market(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) {
        fail(name, 1, "empty file");
    }
    ++lineno;
    const auto header = split_ws(line);
    if (header.size() < 5 || lower(header[0]) != "%%matrixmarket" ||
        lower(header[1]) != "matrix" || lower(header[2]) != "coordinate" ||
        lower(header[3]) != "real") {
        fail(name, lineno, "expected '%%MatrixMarket matrix coordinate real ...' header");
    }
    const std::string sym = lower(header[4]);
    bool symmetric = false;
    if (sym == "symmetric") {
        symmetric = true;
    } else if (sym != "general") {
        fail(name, lineno, "unsupported symmetry '" + std::string(header[4]) + "'");
    }

    // skip comments, read size line
    Eigen::Index rows = 0, cols = 0;
    std::int64_t nnz = 0;
    for (;;) {
        if (!std::getline(in, line)) {
            fail(name, lineno + 1, "missing size line");
        }
        ++lineno;
        if (!line.empty() && line[0] == '%') {
            continue;
        }
        const auto tok = split_ws(line);
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != 3) {
            fail(name, lineno, "size line must be 'rows cols nnz'");
        }
        const auto r = parse_int(tok[0]);
        const auto c = parse_int(tok[1]);
        const auto z = parse_int(tok[2]);
        if (!r || !c || !z || *r < 1 || *c < 1 || *z < 0) {
            fail(name, lineno, "bad size line");
        }
        rows = *r;
        cols = *c;
        nnz = *z;
        break;
    }

    std::vector<CsrMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    std::int64_t seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line)) {
            fail(name, lineno + 1,
                 "expected " + std::to_string(nnz) + " entries, got " + std::to_string(seen));
        }
        ++lineno;
        if (!line.empty() && line[0] == '%') {
            continue;
        }
        const auto tok = split_ws(line);
        if (tok.empty()) {
            continue;
        }
        if (tok.size() != 3) {
            fail(name, lineno, "entry must be 'i j value'");
        }
        const auto i = parse_int(tok[0]);
        const auto j = parse_int(tok[1]);
        const auto v = parse_double(tok[2]);
        if (!i || !j || !v) {
            fail(name, lineno, "malformed entry");
        }
        if (*i < 1 || *i > rows || *j < 1 || *j > cols) {
            fail(name, lineno, "index out of range");
        }
        triplets.push_back({*i - 1, *j - 1, *v});
        if (symmetric && *i != *j) {
            triplets.push_back({*j - 1, *i - 1, *v});
        }
        ++seen;
    }
    return CsrMatrix::from_triplets(rows, cols, std::move(triplets));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open '" + path.string() + "'");
    }
    return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const CsrMatrix& m, bool symmetric) {
    if (symmetric && !m.is_symmetric()) {
        throw std::invalid_argument("write_matrix_market: matrix is not symmetric");
    }
    std::vector<CsrMatrix::Triplet> entries;
    for (Eigen::Index i = 0; i < m.rows; ++i) {
        for (std::int64_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
            const std::int32_t j = m.col_idx[static_cast<std::size_t>(p)];
            if (symmetric && j > i) {
                continue;  // store the lower triangle only
            }
            entries.push_back({i, j, m.values[static_cast<std::size_t>(p)]});
        }
    }
    out << "%%MatrixMarket matrix coordinate real "
        << (symmetric ? "symmetric" : "general") << "\n";
    out << m.rows << " " << m.cols << " " << entries.size() << "\n";
    for (const auto& e : entries) {
        out << (e.row + 1) << " " << (e.col + 1) << " " << format_double(e.value) << "\n";
    }
}

void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& m,
                         bool symmetric) {
    std::ofstream out(path);
    if (!out) {
        throw parse_error("cannot open '" + path.string() + "' for writing");
    }
    write_matrix_market(out, m, symmetric);
}

Eigen::MatrixXd read_dense_text(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(line);
        if (tok.empty()) {
            continue;
        }
        std::vector<double> row;
        row.reserve(tok.size());
        for (const auto& t : tok) {
            const auto v = parse_double(t);
            if (!v) {
                fail(name, lineno, "malformed number '" + std::string(t) + "'");
            }
            row.push_back(*v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(name, lineno, "inconsistent row length");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        fail(name, lineno, "no data");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

Eigen::MatrixXd read_dense_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open '" + path.string() + "'");
    }
    return read_dense_text(in, path.string());
}

void write_dense_text(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) {
        throw parse_error("cannot open '" + path.string() + "' for writing");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << " ";
            }
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

} // namespace rmgd
