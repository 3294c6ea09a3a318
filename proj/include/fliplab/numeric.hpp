#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fliplab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Index sentinels for pred/succ when no previous/next occurrence exists.
/// Arithmetic on sentinels is forbidden; they only participate in comparisons.
inline constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
inline constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

inline bool is_finite_index(std::int64_t v) { return v != kNegInf && v != kPosInf; }

/// Thrown when an input fails validation (bad file, bad argument).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an internal invariant that the construction guarantees is
/// observed to fail. This is a bug surface, not a recoverable condition.
struct InternalInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

template <typename W>
struct NumericTraits;

template <>
struct NumericTraits<double> {
  // Strictly-positive gain threshold in floating mode; exact zero ties are
  // measure-zero under continuous weights but floats can manufacture them.
  static double gain_epsilon() { return 1e-12; }
  static double to_double(double v) { return v; }
};

template <>
struct NumericTraits<Rational> {
  static Rational gain_epsilon() { return Rational(0); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
};

}  // namespace fliplab
