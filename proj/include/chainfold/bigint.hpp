#ifndef CHAINFOLD_BIGINT_HPP
#define CHAINFOLD_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "chainfold/error.hpp"

namespace chainfold {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Exact count of maximal chains; bounded by n!.
using ChainCount = BigInt;

inline BigInt factorial(int n) {
  detail::require(n >= 0, "factorial of a negative number");
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Zero outside 0 <= k <= n.
inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt b = 1;
  for (int i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return b;
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }

}  // namespace chainfold

#endif  // CHAINFOLD_BIGINT_HPP
