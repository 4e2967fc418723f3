#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aatomo {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Input outside the geometric or analytic domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent sizes, counts or options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable artifact file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

}  // namespace aatomo
