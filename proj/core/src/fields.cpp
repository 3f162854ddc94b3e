#include "cf/fields.hpp"

#include <cmath>

#include "cf/rng.hpp"

namespace cf {

int FieldModel::max_vertex_degree() const {
  size_t d = 0;
  for (const auto& [k, v] : vertices) d = std::max(d, k.size());
  return int(d);
}

namespace {

// plain gauss-jordan; the matrices here are tiny and SPD
std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
  const int n = int(a.size());
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) throw model_error("covariance is singular");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    double d = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = a[r][c];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// cholesky factor L with g = L L^T; throws if g is not positive definite
std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& g) {
  const int n = int(g.size());
  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        if (s <= 0) throw model_error("covariance is not positive definite");
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  }
  return L;
}

}  // namespace

FieldModel make_field_model(std::vector<std::string> labels,
                            std::vector<std::vector<double>> g,
                            std::map<Multiset, double> vertices) {
  const int n = int(labels.size());
  if (n < 1) throw model_error("model needs at least one site");
  if (int(g.size()) != n) throw model_error("covariance shape mismatch");
  for (const auto& row : g)
    if (int(row.size()) != n) throw model_error("covariance shape mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(g[i][j] - g[j][i]) > 1e-12 * std::max(1.0, std::abs(g[i][j])))
        throw model_error("covariance must be symmetric");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(g[i][j])) throw model_error("covariance must be finite");

  std::map<Multiset, double> vs;
  for (auto& [k, v] : vertices) {
    if (k.empty()) throw model_error("vertex with empty index set");
    if (k.size() > 6) throw model_error("vertex degree beyond 6");
    for (int idx : k)
      if (idx < 0 || idx >= n) throw model_error("vertex index out of range");
    if (!std::isfinite(v)) throw model_error("vertex coefficient must be finite");
    auto key = ms_normalized(k);
    vs[key] += v;  // merge duplicate spellings of the same multiset
  }

  cholesky(g);  // SPD check

  FieldModel m;
  m.labels = std::move(labels);
  m.ginv = invert(g);
  m.g = std::move(g);
  m.vertices = std::move(vs);
  return m;
}

double interaction_action(const FieldModel& m, const std::vector<double>& phi) {
  double s = 0;
  for (const auto& [X, v] : m.vertices) {
    double mono = v / double(ms_symmetry(X));
    for (int idx : X) mono *= phi[idx];
    s += mono;
  }
  return s;
}

double isserlis_green(const FieldModel& m, const Multiset& X) {
  for (int v : X)
    if (v < 0 || v >= m.size()) throw domain_error("site index out of range");
  return isserlis_green_t(m.g, ms_normalized(X));
}

// ---------- oracle ----------

namespace {

double gaussian_action(const FieldModel& m, const std::vector<double>& phi) {
  double s = 0;
  const int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += phi[i] * m.ginv[i][j] * phi[j];
  return -0.5 * s;
}

double full_weight_log(const FieldModel& m, const std::vector<double>& phi,
                       const std::vector<double>& J) {
  double s = gaussian_action(m, phi) + interaction_action(m, phi);
  for (size_t i = 0; i < J.size(); ++i) s += J[i] * phi[i];
  return s;
}

std::vector<double> source_or_zero(const FieldModel& m, const std::vector<double>& src) {
  if (src.empty()) return std::vector<double>(m.size(), 0.0);
  if (int(src.size()) != m.size()) throw domain_error("source dimension mismatch");
  return src;
}

double monomial(const Multiset& X, const std::vector<double>& phi) {
  double p = 1;
  for (int idx : X) p *= phi[idx];
  return p;
}

// long double accumulators: the legendre check divides second differences of
// ln(den) by fd_step^2, so summation noise must stay well below 1e-12
struct QuadratureSums {
  long double den = 0;
  std::vector<long double> num;
};

template <class Body>
void sweep_grid(const FieldModel& m, const OracleOptions& opt, Body&& body) {
  const int n = m.size();
  if (n > 3) throw capacity_error("quadrature beyond 3 sites");
  if (opt.grid_points < 3) throw domain_error("quadrature needs >= 3 points per axis");
  double smax = 0;
  for (int i = 0; i < n; ++i) smax = std::max(smax, m.g[i][i]);
  const double R = opt.half_width_sigmas * std::sqrt(smax);
  const int P = opt.grid_points;
  const double h = 2 * R / (P - 1);

  std::vector<double> phi(n, 0.0);
  std::vector<int> ix(n, 0);
  while (true) {
    double wtrap = 1;
    for (int d = 0; d < n; ++d) {
      phi[d] = -R + h * ix[d];
      if (ix[d] == 0 || ix[d] == P - 1) wtrap *= 0.5;
    }
    body(phi, wtrap);
    int d = n - 1;
    while (d >= 0 && ix[d] == P - 1) ix[d--] = 0;
    if (d < 0) break;
    ++ix[d];
  }
}

QuadratureSums quadrature_sums(const FieldModel& m, const std::vector<Multiset>& targets,
                               const OracleOptions& opt) {
  auto J = source_or_zero(m, opt.source);
  QuadratureSums s;
  s.num.assign(targets.size(), 0.0);
  sweep_grid(m, opt, [&](const std::vector<double>& phi, double wtrap) {
    double w = wtrap * std::exp(full_weight_log(m, phi, J));
    if (!std::isfinite(w)) throw model_error("divergent action weight on the grid");
    s.den += w;
    for (size_t t = 0; t < targets.size(); ++t) s.num[t] += w * monomial(targets[t], phi);
  });
  if (!(s.den > 0) || !std::isfinite(s.den))
    throw model_error("partition integral is not positive");
  return s;
}

}  // namespace

double log_partition(const FieldModel& m, const std::vector<double>& J, int grid_points) {
  OracleOptions opt;
  opt.grid_points = grid_points;
  opt.source = J;
  auto s = quadrature_sums(m, {}, opt);
  return double(std::log(s.den));  // grid volume factor cancels in every difference
}

std::map<Multiset, OracleResult> measure_oracle_many(const FieldModel& m,
                                                     const std::vector<Multiset>& targets,
                                                     OracleMethod method,
                                                     const OracleOptions& opt) {
  std::vector<Multiset> keys;
  keys.reserve(targets.size());
  for (const auto& t : targets) {
    Multiset k = ms_normalized(t);
    for (int v : k)
      if (v < 0 || v >= m.size()) throw domain_error("site index out of range");
    keys.push_back(std::move(k));
  }

  std::map<Multiset, OracleResult> out;
  if (method == OracleMethod::quadrature) {
    auto s = quadrature_sums(m, keys, opt);
    for (size_t t = 0; t < keys.size(); ++t)
      out[keys[t]] = {double(s.num[t] / s.den), 0.0};
    return out;
  }

  if (!opt.seed_set) throw domain_error("monte carlo requires an explicit seed");
  if (opt.samples < 1) throw domain_error("monte carlo needs samples >= 1");
  auto J = source_or_zero(m, opt.source);
  const int n = m.size();
  auto L = cholesky(m.g);

  const size_t T = keys.size();
  long double sw = 0, sw2 = 0;
  std::vector<long double> swy(T, 0), sw2y(T, 0), sw2y2(T, 0);
  Rng root(opt.seed);
  const long long nblocks = (opt.samples + opt.block_size - 1) / opt.block_size;
  std::vector<double> z(n), phi(n);
  for (long long b = 0; b < nblocks; ++b) {
    Rng blk = root.sub("block").sub(std::uint64_t(b));
    const long long lo = b * opt.block_size;
    const long long hi = std::min<long long>(opt.samples, lo + opt.block_size);
    for (long long i = lo; i < hi; ++i) {
      for (int d = 0; d < n; ++d) z[d] = blk.normal();
      for (int d = 0; d < n; ++d) {
        double v = 0;
        for (int k = 0; k <= d; ++k) v += L[d][k] * z[k];
        phi[d] = v;
      }
      double lw = interaction_action(m, phi);
      for (int d = 0; d < n; ++d) lw += J[d] * phi[d];
      double w = std::exp(lw);
      if (!std::isfinite(w)) throw model_error("divergent reweighting factor");
      sw += w;
      sw2 += w * w;
      for (size_t t = 0; t < T; ++t) {
        double y = monomial(keys[t], phi);
        swy[t] += w * y;
        sw2y[t] += w * w * y;
        sw2y2[t] += w * w * y * y;
      }
    }
  }
  if (!(sw > 0)) throw model_error("all importance weights vanished");
  for (size_t t = 0; t < T; ++t) {
    long double r = swy[t] / sw;
    // delta-method variance of the self-normalized ratio
    long double var = (sw2y2[t] - 2 * r * sw2y[t] + r * r * sw2) / (sw * sw);
    out[keys[t]] = {double(r), std::sqrt(std::max(0.0, double(var)))};
  }
  return out;
}

OracleResult measure_oracle(const FieldModel& m, const Multiset& X, OracleMethod method,
                            const OracleOptions& opt) {
  return measure_oracle_many(m, {X}, method, opt).begin()->second;
}

double ds_residual(const FieldModel& m, const GreenTable<double>& greens, int x,
                   const Multiset& X) {
  return ds_residual_t<double>(m.g, m.vertices, greens, x, ms_normalized(X));
}

// ---------- legendre ----------

namespace {

// gradient of W by central differences
std::vector<double> w_grad(const FieldModel& m, std::vector<double> J, double h, int pts) {
  const int n = m.size();
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    J[i] += h;
    double up = log_partition(m, J, pts);
    J[i] -= 2 * h;
    double dn = log_partition(m, J, pts);
    J[i] += h;
    g[i] = (up - dn) / (2 * h);
  }
  return g;
}

std::vector<std::vector<double>> sym_hessian_once(const FieldModel& m,
                                                  const std::vector<double>& J0, double h,
                                                  int pts,
                                                  double (*eval)(const FieldModel&,
                                                                 const std::vector<double>&,
                                                                 int)) {
  const int n = int(J0.size());
  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0));
  std::vector<double> J = J0;
  const double f0 = eval(m, J0, pts);
  for (int i = 0; i < n; ++i) {
    J[i] += h;
    double fp = eval(m, J, pts);
    J[i] -= 2 * h;
    double fm = eval(m, J, pts);
    J[i] += h;
    H[i][i] = (fp - 2 * f0 + fm) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      J[i] += h;
      J[j] += h;
      double fpp = eval(m, J, pts);
      J[j] -= 2 * h;
      double fpm = eval(m, J, pts);
      J[i] -= 2 * h;
      double fmm = eval(m, J, pts);
      J[j] += 2 * h;
      double fmp = eval(m, J, pts);
      J[i] += h;
      J[j] -= h;
      H[i][j] = H[j][i] = (fpp - fpm - fmp + fmm) / (4 * h * h);
    }
  }
  return H;
}

}  // namespace

LegendreReport legendre_duality_check(const FieldModel& m, const std::vector<double>& J,
                                      const LegendreOptions& opt) {
  const int n = m.size();
  if (n > 2) throw capacity_error("legendre check beyond 2 sites");
  auto J0 = source_or_zero(m, J);
  const double h = opt.fd_step;
  const int pts = opt.grid_points;

  // W'' with one richardson pass
  auto D1 = sym_hessian_once(m, J0, h, pts, &log_partition);
  auto D2 = sym_hessian_once(m, J0, 2 * h, pts, &log_partition);
  std::vector<std::vector<double>> wpp(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wpp[i][j] = (4 * D1[i][j] - D2[i][j]) / 3;

  auto phi_bar = w_grad(m, J0, h, pts);

  // numeric transform: minimize W(J) - J . phi by newton on the fd gradient,
  // warm-started across nearby phi probes
  std::vector<double> warm = J0;
  auto gamma_eval = [&](const std::vector<double>& phi) {
    std::vector<double> Jc = warm;
    for (int it = 0; it < opt.newton_max; ++it) {
      auto grad = w_grad(m, Jc, h, pts);
      double worst = 0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(grad[i] - phi[i]));
      if (worst < opt.newton_tol) break;
      auto H = sym_hessian_once(m, Jc, h, pts, &log_partition);
      auto Hinv = invert(H);
      for (int i = 0; i < n; ++i) {
        double step = 0;
        for (int j = 0; j < n; ++j) step += Hinv[i][j] * (grad[j] - phi[j]);
        Jc[i] -= step;
      }
      if (it + 1 == opt.newton_max) throw precision_error("transform newton stalled");
    }
    warm = Jc;
    double val = log_partition(m, Jc, pts);
    for (int i = 0; i < n; ++i) val -= Jc[i] * phi[i];
    return val;
  };

  auto gamma_hess = [&](double step) {
    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0));
    std::vector<double> p = phi_bar;
    const double f0 = gamma_eval(p);
    for (int i = 0; i < n; ++i) {
      p[i] += step;
      double fp = gamma_eval(p);
      p[i] -= 2 * step;
      double fm = gamma_eval(p);
      p[i] += step;
      H[i][i] = (fp - 2 * f0 + fm) / (step * step);
      for (int j = i + 1; j < n; ++j) {
        p[i] += step;
        p[j] += step;
        double fpp = gamma_eval(p);
        p[j] -= 2 * step;
        double fpm = gamma_eval(p);
        p[i] -= 2 * step;
        double fmm = gamma_eval(p);
        p[j] += 2 * step;
        double fmp = gamma_eval(p);
        p[i] += step;
        p[j] -= step;
        H[i][j] = H[j][i] = (fpp - fpm - fmp + fmm) / (4 * step * step);
      }
    }
    return H;
  };
  auto G1 = gamma_hess(h);
  auto G2 = gamma_hess(2 * h);
  std::vector<std::vector<double>> gpp(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gpp[i][j] = (4 * G1[i][j] - G2[i][j]) / 3;

  LegendreReport rep;
  rep.wpp = wpp;
  rep.gpp = gpp;
  rep.phi_bar = phi_bar;
  double dev = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double prod = 0;
      for (int k = 0; k < n; ++k) prod += wpp[i][k] * gpp[k][j];
      dev = std::max(dev, std::abs(prod + (i == j ? 1.0 : 0.0)));
    }
  rep.max_dev = dev;
  return rep;
}

SelfEnergyReport self_energy_series_check(const FieldModel& m, int grid_points) {
  if (m.size() != 1) throw domain_error("self energy series is a single-site check");
  OracleOptions opt;
  opt.grid_points = grid_points;
  auto mo = measure_oracle_many(m, {{0}, {0, 0}}, OracleMethod::quadrature, opt);
  double mean = mo.at({0}).value;
  double c2 = mo.at({0, 0}).value - mean * mean;
  const double G = m.g[0][0];
  const double pi = -1.0 / c2 + m.ginv[0][0];  // second transform derivative plus precision

  SelfEnergyReport r;
  r.c2 = c2;
  r.pi = pi;
  double partial = 0, chain = G;
  for (int k = 1; k <= 3; ++k) {
    partial += chain;        // G (pi G)^{k-1}
    chain *= pi * G;
    r.partial_errors.push_back(std::abs(c2 - partial));
  }
  return r;
}

// ---------- mean-field iteration ----------

TreeExpansionResult mean_field_tree_expansion(const FieldModel& m,
                                              const std::map<Multiset, double>& gamma_i,
                                              const std::vector<double>& J, int iterations) {
  const int n = m.size();
  if (int(J.size()) != n) throw domain_error("source dimension mismatch");
  if (iterations < 1) throw domain_error("need at least one sweep");
  for (const auto& [k, v] : gamma_i) {
    if (k.size() < 2) throw domain_error("effective vertices start at degree 2");
    for (int idx : k)
      if (idx < 0 || idx >= n) throw domain_error("vertex index out of range");
  }

  TreeExpansionResult res;
  std::vector<double> phi(n, 0.0);
  res.iterates.push_back(phi);
  double prev_delta = 0;
  int growth_run = 0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> force(n, 0.0);
    for (const auto& [V, coeff] : gamma_i) {
      size_t a = 0;
      while (a < V.size()) {
        size_t b = a;
        while (b < V.size() && V[b] == V[a]) ++b;
        int y = V[a];
        Multiset Z = ms_minus_one(V, y);
        double term = coeff / double(ms_symmetry(Z));
        for (int idx : Z) term *= phi[idx];
        force[y] += term;
        a = b;
      }
    }
    std::vector<double> next(n, 0.0);
    for (int x = 0; x < n; ++x) {
      double s = 0;
      for (int y = 0; y < n; ++y) s += m.g[x][y] * (J[y] + force[y]);
      next[x] = s;
    }
    double delta = 0;
    for (int x = 0; x < n; ++x) delta = std::max(delta, std::abs(next[x] - phi[x]));
    phi = std::move(next);
    res.iterates.push_back(phi);
    if (it > 0 && delta > prev_delta * (1 + 1e-12)) {
      if (++growth_run >= 3) throw diagnostic_error("tree iteration is not contracting");
    } else {
      growth_run = 0;
    }
    prev_delta = delta;
    res.last_delta = delta;
  }
  res.converged = res.last_delta < 1e-10;
  return res;
}

}  // namespace cf
