// common.hpp — shared error types and small numeric helpers

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace adilab {

using cplx = std::complex<double>;

// Hard numerical failure (quadrature non-convergence, invariant drift, ...).
// The CLI maps this to exit code 4.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or precondition violation. CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double pi = 3.14159265358979323846264338327950288;

inline double sqr(double x) { return x * x; }

} // namespace adilab
