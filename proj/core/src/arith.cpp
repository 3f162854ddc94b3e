#include "cf/arith.hpp"

#include <cmath>

#include "cf/errors.hpp"

namespace cf {

FactoredInteger factorize(long long n) {
  if (n < 1) throw domain_error("factorize: n must be positive");
  FactoredInteger out;
  out.n = n;
  long long m = n;
  for (long long p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p) continue;
    int e = 0;
    while (m % p == 0) { m /= p; ++e; }
    out.factors.emplace_back(p, e);
  }
  if (m > 1) out.factors.emplace_back(m, 1);
  return out;
}

long long multiplicative_eval(MultFn fn, long long n) {
  auto fac = factorize(n);
  long long out = 1;
  for (auto [p, e] : fac.factors) {
    switch (fn) {
      case MultFn::d:
        out *= e + 1;
        break;
      case MultFn::sigma: {
        long long pk = 1, s = 1;  // 1 + p + ... + p^e
        for (int i = 0; i < e; ++i) { pk *= p; s += pk; }
        out *= s;
        break;
      }
      case MultFn::phi: {
        long long pk = p - 1;
        for (int i = 1; i < e; ++i) pk *= p;
        out *= pk;
        break;
      }
      case MultFn::mu:
        if (e > 1) return 0;
        out = -out;
        break;
    }
  }
  return out;
}

DirichletSeries DirichletSeries::zeros(int N) {
  if (N < 1) throw domain_error("DirichletSeries: length must be positive");
  DirichletSeries s;
  s.a.assign(size_t(N) + 1, Rational(0));
  return s;
}

DirichletSeries dirichlet_convolve(const DirichletSeries& x, const DirichletSeries& y) {
  int N = x.length();
  if (N < 1 || N != y.length())
    throw domain_error("dirichlet_convolve: truncation lengths must match");
  auto c = DirichletSeries::zeros(N);
  for (int m = 1; m <= N; ++m) {
    if (x.a[m] == 0) continue;
    for (int q = 1; m * q <= N; ++q) c.a[size_t(m) * q] += x.a[m] * y.a[q];
  }
  return c;
}

std::vector<int> mobius_sieve(int N) {
  if (N < 1) throw domain_error("mobius_sieve: N must be positive");
  std::vector<int> mu(size_t(N) + 1, 1);
  std::vector<int> least(size_t(N) + 1, 0);
  std::vector<int> primes;
  mu[0] = 0;
  for (int i = 2; i <= N; ++i) {
    if (!least[i]) {
      least[i] = i;
      mu[i] = -1;
      primes.push_back(i);
    }
    for (int p : primes) {
      if (p > least[i] || (long long)p * i > N) break;
      least[p * i] = p;
      mu[p * i] = (p == least[i]) ? 0 : -mu[i];
    }
  }
  return mu;
}

DirichletSeries mobius_invert(const DirichletSeries& x) {
  int N = x.length();
  if (N < 1) throw domain_error("mobius_invert: empty series");
  auto mu = mobius_sieve(N);
  auto b = DirichletSeries::zeros(N);
  for (int k = 1; k <= N; ++k) {
    if (x.a[k] == 0) continue;
    for (int j = 1; k * j <= N; ++j)
      if (mu[j]) b.a[size_t(k) * j] += (mu[j] > 0 ? x.a[k] : -x.a[k]);
  }
  return b;
}

std::vector<long long> primes_up_to(long long P) {
  std::vector<long long> out;
  if (P < 2) return out;
  std::vector<bool> comp(size_t(P) + 1, false);
  for (long long i = 2; i <= P; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (long long j = i * i; j <= P; j += i) comp[j] = true;
  }
  return out;
}

ZetaReport zeta_compare(double s, long long n_terms, long long p_primes) {
  if (!(s > 1.0)) throw domain_error("zeta_compare: need s > 1");
  if (n_terms < 1 || p_primes < 2) throw domain_error("zeta_compare: bad truncation");
  ZetaReport r;
  r.s = s;
  r.n_terms = n_terms;
  r.p_primes = p_primes;

  // Kahan summation, ascending n; the terms are monotone so this is plenty
  double sum = 0, comp = 0;
  for (long long n = 1; n <= n_terms; ++n) {
    double term = std::pow(double(n), -s) - comp;
    double t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  r.partial_sum = sum;
  // sum_{n > N} n^{-s} <= integral_N^inf x^{-s} dx
  r.partial_tail = std::pow(double(n_terms), 1.0 - s) / (s - 1.0);

  double logprod = 0;
  for (long long p : primes_up_to(p_primes)) logprod += -std::log1p(-std::pow(double(p), -s));
  r.euler_product = std::exp(logprod);
  // dropped log terms: sum_{p > P} -log(1 - p^-s) <= 2 sum_{p > P} p^-s <= 2 P^{1-s}/(s-1)
  double log_tail = 2.0 * std::pow(double(p_primes), 1.0 - s) / (s - 1.0);
  r.euler_tail = r.euler_product * std::expm1(log_tail);

  r.agree = std::abs(r.partial_sum - r.euler_product) <= r.partial_tail + r.euler_tail;
  return r;
}

}  // namespace cf
