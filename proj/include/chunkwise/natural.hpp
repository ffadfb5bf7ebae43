#pragma once

#include <cstddef>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace chunkwise {

/// Arbitrary-precision natural number. Values are never negative: the
/// signature has no subtraction, so every operation stays in N.
using Natural = boost::multiprecision::cpp_int;

/// Exact rational, always held in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Natural& n) { return n.str(); }

inline std::size_t hash_natural(const Natural& n) {
  return boost::multiprecision::hash_value(n);
}

}  // namespace chunkwise
