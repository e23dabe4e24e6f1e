#pragma once

#include <stdexcept>
#include <string>

namespace qp {

// Input that fails schema or structural validation. CLI maps this to exit 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Mathematically infeasible request (singular linear part, degenerate pairing,
// counting budget exceeded, ...). CLI maps this to exit 2.
class math_error : public std::runtime_error {
public:
    explicit math_error(const std::string& what) : std::runtime_error(what) {}
};

// Exact arithmetic left the supported 64-bit range.
class overflow_error : public std::runtime_error {
public:
    explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qp
