#ifndef LYAP_COMMON_HPP
#define LYAP_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace lyap {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

inline constexpr double kPi = 3.14159265358979323846;

// Bad user input: unknown kinds, out-of-range parameters, mismatched shapes.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-convergence, bracketing failure, near-singular solves.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline double sqr(double x) { return x * x; }

} // namespace lyap

#endif
