#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cf/numeric.hpp"

namespace cf {

struct FactoredInteger {
  long long n = 1;
  std::vector<std::pair<long long, int>> factors;  // (prime, exponent), primes ascending
};

// trial division; adequate through 10^12
FactoredInteger factorize(long long n);

enum class MultFn { d, sigma, phi, mu };

// evaluated from the factorization by multiplicativity
long long multiplicative_eval(MultFn fn, long long n);

// Dirichlet coefficients a_1..a_N stored at indices 1..N; index 0 unused.
struct DirichletSeries {
  std::vector<Rational> a;

  int length() const { return int(a.size()) - 1; }
  static DirichletSeries zeros(int N);
  bool operator==(const DirichletSeries&) const = default;
};

// c_n = sum_{m | n} a_m b_{n/m}; truncation lengths must match
DirichletSeries dirichlet_convolve(const DirichletSeries& x, const DirichletSeries& y);

// b_n = sum_{k | n} mu(n/k) a_k, the inverse of divisor summation
DirichletSeries mobius_invert(const DirichletSeries& x);

// mu sieve for 1..N (index 0 unused)
std::vector<int> mobius_sieve(int N);
std::vector<long long> primes_up_to(long long P);

struct ZetaReport {
  double s = 0;
  long long n_terms = 0, p_primes = 0;
  double partial_sum = 0;
  double partial_tail = 0;   // bound on the dropped sum
  double euler_product = 0;
  double euler_tail = 0;     // bound on the product truncation
  bool agree = false;        // |partial - euler| <= partial_tail + euler_tail
};

ZetaReport zeta_compare(double s, long long n_terms, long long p_primes);

}  // namespace cf
