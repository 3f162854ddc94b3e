#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cf/errors.hpp"
#include "cf/numeric.hpp"
#include "cf/rng.hpp"

namespace cf {

struct TimeGrid {
  double t_end = 1.0;
  int steps = 1;
  double dt() const { return t_end / steps; }
};

TimeGrid make_time_grid(double t_end, int steps);

struct WienerPath {
  TimeGrid grid;
  std::vector<double> increments;  // normal(0, dt), one per step
  std::uint64_t stream_id = 0;
  double total() const;  // W at t_end
};

struct PoissonJumps {
  double t_end = 1.0;
  std::vector<double> jump_times;  // ascending, within (0, t_end]
  std::uint64_t stream_id = 0;
  long long count() const { return (long long)(jump_times.size()); }
  long long count_at(double t) const;  // jumps in (0, t]
};

// Deterministic for a fixed stream: the same Rng replays the same path.
WienerPath sample_wiener(const TimeGrid& grid, const Rng& stream);
PoissonJumps sample_poisson(double t_end, const Rng& stream);  // unit rate

struct PowerSums {
  std::vector<double> p;  // p[k-1] = sum_i (dx_i)^k
};

PowerSums power_sums(const std::vector<double>& increments, int n);

// Off-diagonal sum over distinct ordered index tuples, recovered from power
// sums by the partition inversion: sum over occupation profiles of
// rho * prod_j [(-1)^{j-1} (j-1)! p_j]^{n_j}. Cost is O(steps * n) for the
// power sums plus a constant profile sweep, never the steps^n loop.
double offdiag_from_power_sums(const PowerSums& ps, int n);
double offdiag_wiener(const WienerPath& path, int n);  // n <= 8

// Reference implementation: literal sum over strictly increasing tuples times
// n!. Only for small grids; guards on steps^n work.
double offdiag_brute_force(const std::vector<double>& increments, int n);

// Compensated-Poisson off-diagonal integral. The partition sum collapses to a
// polynomial in (N_t, t): size-1 blocks contribute N_t - t, larger blocks N_t,
// with the same inversion weights. Exact in rational arithmetic; n <= 12.
Rational offdiag_poisson_exact(long long jumps, const Rational& t, int n);
double offdiag_poisson(const PoissonJumps& jumps, int n);

// Orthogonal polynomials from their generating functions
// exp(x s - s^2/2) = sum s^n/n! H_n(x) and e^{-zt} (1+z)^x = sum z^n/n! C_n(x,t),
// evaluated by the three-term recurrences. n <= 30.
double hermite(int n, double x);
Rational hermite_exact(int n, const Rational& x);
double charlier(int n, double x, double t);
Rational charlier_exact(int n, const Rational& x, const Rational& t);

// t^{n/2} H_n(w / sqrt(t)), the continuum value of the n-fold Wiener integral
double hermite_scaled(int n, double w, double t);

// ---------- stochastic verification ----------

struct StochasticReport {
  std::string check;
  double target = 0;
  double estimate = 0;
  double stderr_est = 0;
  long long paths = 0;  // paths of the deciding run
  std::uint64_t seed = 0;
  bool pass = false;
  bool retried = false;  // one 4x-paths retry on a fresh substream is allowed
};

enum class MartingaleKind { wiener, poisson, general };

// Monte-Carlo means of the exponentiated martingales:
//   wiener:  e^{z W_t - z^2 t / 2}            -> 1
//   poisson: e^{-z t} (1+z)^{N_t}             -> 1   (|z| < 1)
//   general: paired exponential functionals of one Wiener path with the step
//            profiles f = 1_[0,1], g = 2 * 1_[0.5,1] -> exp(1); z, t_end unused
StochasticReport exponentiated_martingale_check(MartingaleKind kind, double z,
                                                double t_end, long long paths,
                                                std::uint64_t seed);

// E[D_n(t) D_m(s)] / (n! m!) against the grid-exact orthogonality value
// C(min steps, n) dt^n delta_{nm}, which converges to (t^s min)^n / n!.
StochasticReport iterated_moment_check(int n, int m, double t, double s, int steps,
                                       long long paths, std::uint64_t seed);

// Mean of the n-th off-diagonal integral, which is a martingale started at 0.
StochasticReport wiener_offdiag_martingale_check(int n, int steps, double t_end,
                                                 long long paths, std::uint64_t seed);
StochasticReport poisson_offdiag_martingale_check(int n, double t_end, long long paths,
                                                  std::uint64_t seed);

struct ConvergenceReport {
  std::string check;
  int n = 0;
  std::vector<int> steps;              // coarse to fine
  std::vector<double> median_abs_error;  // same order
  long long paths = 0;
  std::uint64_t seed = 0;
  bool pass = false;  // medians strictly decreasing toward the fine grid
};

// Median per-path distance between the grid off-diagonal integral and its
// continuum limit t^{n/2} H_n(W_t/sqrt t) on [0,1], across a x100/x10/x1
// coarsening ladder of the same underlying paths.
ConvergenceReport hermite_convergence_check(int n, int finest_steps, long long paths,
                                            std::uint64_t seed);

}  // namespace cf
