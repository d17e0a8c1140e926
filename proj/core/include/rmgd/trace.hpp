#pragma once

#include "rmgd/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rmgd {

/// Per-iteration telemetry. `alpha`/`omega` describe the step taken from
/// iterate k; the terminal record of a run carries 0 for both since no step
/// leaves it. Counter fields are cumulative snapshots.
struct TraceRecord {
    std::int64_t k = 0;
    double fval = 0.0;
    std::optional<double> fgap;        // f(x_k) - f*, when f* is known
    double gnorm2_sq = 0.0;            // ||g_k||_2^2
    std::optional<double> gnorm_w_sq;  // ||g_k||^2_{A^(2l-1)}, when formable
    double alpha = 0.0;
    double omega = 0.0;
    std::uint64_t matvecs_alg = 0;
    std::uint64_t matvecs_diag = 0;
};

struct Trace {
    std::vector<TraceRecord> records;
    SolverConfig config;  // echo of the run configuration
    std::string problem_label;
};

/// CSV with header
/// `k,fval,fgap,gnorm2_sq,gnorm_w_sq,alpha,omega,matvecs_alg,matvecs_diag`,
/// one row per record, absent optionals as empty fields, and all floats in
/// shortest round-trip form.
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv(const std::filesystem::path& path, const Trace& trace);

/// Strict reader for the format above (used by tests and aggregation).
std::vector<TraceRecord> read_trace_csv(std::istream& in, const std::string& name);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

} // namespace rmgd
