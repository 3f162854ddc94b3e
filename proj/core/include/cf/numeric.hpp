#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>

#include "cf/errors.hpp"

namespace cf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using cx = std::complex<double>;

inline BigInt factorial(int n) {
  if (n < 0) throw domain_error("factorial: negative argument");
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact at every step: r is C(n-k+i, i)
  }
  return r;
}

// (2k-1)!! = (2k)! / (2^k k!), the perfect-matching count of a 2k-set.
inline BigInt odd_double_factorial(int k) {
  if (k < 0) throw domain_error("odd_double_factorial: negative argument");
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r *= 2 * i - 1;
  return r;
}

template <class T>
T int_pow(const T& x, int e) {
  if (e < 0) throw domain_error("int_pow: negative exponent");
  T r = T(1), b = x;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline double to_double(const Rational& q) {
  return q.convert_to<double>();
}

}  // namespace cf
