#include "rmgd/trace.hpp"

#include "rmgd/errors.hpp"
#include "rmgd/numeric_text.hpp"

#include <fstream>
#include <sstream>

namespace rmgd {

namespace {

constexpr const char* kHeader =
    "k,fval,fgap,gnorm2_sq,gnorm_w_sq,alpha,omega,matvecs_alg,matvecs_diag";

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << kHeader << "\n";
    for (const auto& r : trace.records) {
        out << r.k << ',' << format_double(r.fval) << ',';
        if (r.fgap) {
            out << format_double(*r.fgap);
        }
        out << ',' << format_double(r.gnorm2_sq) << ',';
        if (r.gnorm_w_sq) {
            out << format_double(*r.gnorm_w_sq);
        }
        out << ',' << format_double(r.alpha) << ',' << format_double(r.omega) << ','
            << r.matvecs_alg << ',' << r.matvecs_diag << "\n";
    }
}

void write_trace_csv(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw parse_error("cannot open '" + path.string() + "' for writing");
    }
    write_trace_csv(out, trace);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in, const std::string& name) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || line != kHeader) {
        throw parse_error(name + ":1: bad trace header");
    }
    ++lineno;
    std::vector<TraceRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 9) {
            throw parse_error(name + ":" + std::to_string(lineno) + ": expected 9 fields");
        }
        TraceRecord r;
        const auto k = parse_int(f[0]);
        const auto fval = parse_double(f[1]);
        const auto g2 = parse_double(f[3]);
        const auto alpha = parse_double(f[5]);
        const auto omega = parse_double(f[6]);
        const auto ma = parse_int(f[7]);
        const auto md = parse_int(f[8]);
        if (!k || !fval || !g2 || !alpha || !omega || !ma || !md) {
            throw parse_error(name + ":" + std::to_string(lineno) + ": malformed row");
        }
        r.k = *k;
        r.fval = *fval;
        r.gnorm2_sq = *g2;
        r.alpha = *alpha;
        r.omega = *omega;
        r.matvecs_alg = static_cast<std::uint64_t>(*ma);
        r.matvecs_diag = static_cast<std::uint64_t>(*md);
        if (!f[2].empty()) {
            const auto v = parse_double(f[2]);
            if (!v) {
                throw parse_error(name + ":" + std::to_string(lineno) + ": malformed fgap");
            }
            r.fgap = *v;
        }
        if (!f[4].empty()) {
            const auto v = parse_double(f[4]);
            if (!v) {
                throw parse_error(name + ":" + std::to_string(lineno) +
                                  ": malformed gnorm_w_sq");
            }
            r.gnorm_w_sq = *v;
        }
        records.push_back(r);
    }
    return records;
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw parse_error("cannot open '" + path.string() + "'");
    }
    return read_trace_csv(in, path.string());
}

} // namespace rmgd
