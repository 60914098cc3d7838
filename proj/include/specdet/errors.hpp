#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace specdet {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::range_error {
    using std::range_error::range_error;
};

// Evaluation at a pole. `residue` carries the residue when it is known.
struct PoleError : std::domain_error {
    PoleError(const std::string& what, std::complex<double> residue = {})
        : std::domain_error(what), residue(residue) {}
    std::complex<double> residue;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The asymptotic normalization could not be established at any admissible q_start.
struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root bracketing/refinement failed. [lo, hi] is the last interval examined.
struct BracketError : std::runtime_error {
    BracketError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo(lo), hi(hi) {}
    double lo, hi;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace specdet
