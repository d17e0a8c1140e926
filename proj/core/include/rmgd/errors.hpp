#pragma once

#include <stdexcept>
#include <string>

namespace rmgd {

/// Raised by file readers (Matrix Market, LIBSVM, dense text) with the
/// offending source name and 1-based line number in the message.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a step-size denominator is non-positive or non-finite.
/// The only ways this happens are a non-SPD operator or catastrophic
/// drift in the cached recursion vectors; solve() converts it into a
/// NumericalBreakdown result status.
class numerical_breakdown : public std::runtime_error {
public:
    explicit numerical_breakdown(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rmgd
