#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cf/combinat.hpp"
#include "cf/errors.hpp"
#include "cf/numeric.hpp"

namespace cf {

// Field monomials are keyed by sorted multisets of site indices.
using Multiset = std::vector<int>;

inline Multiset ms_normalized(Multiset x) {
  std::sort(x.begin(), x.end());
  return x;
}

inline Multiset ms_union(const Multiset& a, const Multiset& b) {
  Multiset r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

// removes one occurrence of v; domain_error if absent
inline Multiset ms_minus_one(const Multiset& a, int v) {
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) throw domain_error("multiset lacks the removed element");
  Multiset r(a.begin(), it);
  r.insert(r.end(), it + 1, a.end());
  return r;
}

inline std::string ms_key(const Multiset& m) {
  std::string s = "{";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(m[i]);
  }
  return s + "}";
}

// prod over distinct entries of (multiplicity)!, the tuple-to-multiset factor
inline BigInt ms_symmetry(const Multiset& m) {
  BigInt r = 1;
  size_t i = 0;
  while (i < m.size()) {
    size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    r *= factorial(int(j - i));
    i = j;
  }
  return r;
}

// Finite lattice of field sites with gaussian part -1/2 g^{xy} phi_x phi_y and
// interaction sum_X v^X phi^X / (multiset symmetry). g is the covariance;
// its inverse is computed and checked at construction.
struct FieldModel {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> g;     // covariance g_{xy}
  std::vector<std::vector<double>> ginv;  // precision g^{xy}
  std::map<Multiset, double> vertices;    // v^X on sorted index multisets

  int size() const { return int(labels.size()); }
  int max_vertex_degree() const;
};

FieldModel make_field_model(std::vector<std::string> labels,
                            std::vector<std::vector<double>> g,
                            std::map<Multiset, double> vertices);

// S_I(phi) = sum over vertex multisets of v^X phi^X / ms_symmetry(X)
double interaction_action(const FieldModel& m, const std::vector<double>& phi);

enum class GreenKind { ordinary, cumulant };

template <class T>
struct GreenTable {
  GreenKind kind = GreenKind::ordinary;
  std::map<Multiset, T> vals;

  const T& at(const Multiset& x) const {
    auto it = vals.find(x);
    if (it == vals.end()) throw domain_error("green table misses " + ms_key(x));
    return it->second;
  }
  bool contains(const Multiset& x) const { return vals.count(x) != 0; }
};

namespace detail {

inline std::vector<int> positions(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i;
  return p;
}

// labels of one position block, ascending because X is sorted
inline Multiset block_labels(const Multiset& X, const std::vector<int>& block) {
  Multiset r;
  r.reserve(block.size());
  for (int pos : block) r.push_back(X[pos]);
  return r;
}

}  // namespace detail

// <<phi_X>> = sum over partitions of the index tuple of
// (-1)^{N-1} (N-1)! prod_blocks <phi_block>
template <class T>
GreenTable<T> greens_to_cumulants(const GreenTable<T>& t) {
  if (t.kind != GreenKind::ordinary)
    throw domain_error("greens_to_cumulants expects an ordinary table");
  GreenTable<T> out;
  out.kind = GreenKind::cumulant;
  for (const auto& [X, unused] : t.vals) {
    if (X.empty()) throw domain_error("green table keys must be nonempty");
    T acc{};
    PartitionStream ps(detail::positions(int(X.size())));
    while (auto p = ps.next()) {
      int N = p->block_count();
      T term = ((N - 1) % 2 == 0) ? T(1) : T(-1);
      term = term * T(double(factorial(N - 1)));
      for (const auto& b : p->blocks) term = term * t.at(detail::block_labels(X, b));
      acc = acc + term;
    }
    out.vals[X] = acc;
  }
  return out;
}

// <phi_X> = sum over partitions of prod_blocks <<phi_block>>
template <class T>
GreenTable<T> cumulants_to_greens(const GreenTable<T>& t) {
  if (t.kind != GreenKind::cumulant)
    throw domain_error("cumulants_to_greens expects a cumulant table");
  GreenTable<T> out;
  out.kind = GreenKind::ordinary;
  for (const auto& [X, unused] : t.vals) {
    if (X.empty()) throw domain_error("green table keys must be nonempty");
    T acc{};
    PartitionStream ps(detail::positions(int(X.size())));
    while (auto p = ps.next()) {
      T term(1);
      for (const auto& b : p->blocks) term = term * t.at(detail::block_labels(X, b));
      acc = acc + term;
    }
    out.vals[X] = acc;
  }
  return out;
}

// pair-partition sum of covariance products; zero for odd orders
template <class T>
T isserlis_green_t(const std::vector<std::vector<T>>& g, const Multiset& X) {
  if (X.size() % 2 == 1) return T{};
  if (X.empty()) return T(1);
  T acc{};
  PairPartitionStream ps(detail::positions(int(X.size())));
  while (auto m = ps.next()) {
    T term(1);
    for (auto [p, q] : m->pairs) term = term * g[X[q]][X[p]];
    acc = acc + term;
  }
  return acc;
}

double isserlis_green(const FieldModel& m, const Multiset& X);

// ---------- quadrature / monte carlo oracle ----------

enum class OracleMethod { quadrature, monte_carlo };

struct OracleOptions {
  int grid_points = 2001;          // per axis
  double half_width_sigmas = 8.0;  // integration box in units of max sqrt(g_xx)
  long long samples = 1000000;
  std::uint64_t seed = 0;
  bool seed_set = false;  // monte carlo refuses to run without a seed
  int block_size = 4096;
  std::vector<double> source;  // J, zero when empty
};

struct OracleResult {
  double value = 0;
  double stderr_est = 0;  // 0 for quadrature
};

OracleResult measure_oracle(const FieldModel& m, const Multiset& X, OracleMethod method,
                            const OracleOptions& opt = {});
std::map<Multiset, OracleResult> measure_oracle_many(const FieldModel& m,
                                                     const std::vector<Multiset>& targets,
                                                     OracleMethod method,
                                                     const OracleOptions& opt = {});

// ln of the (unnormalized) partition integral at source J, by quadrature
double log_partition(const FieldModel& m, const std::vector<double>& J, int grid_points);

// ---------- equation-of-motion residual ----------

// <phi_{x union X}> - sum_{x' in X} g_{x x'} <phi_{X \ x'}>
//   - sum_y g_{x y} sum_{vertices V owning y} v^V <phi_{X union (V\y)}> / sym
// Exactly zero in distribution; here evaluated on a supplied green table.
template <class T>
T ds_residual_t(const std::vector<std::vector<T>>& g,
                const std::map<Multiset, T>& vertices, const GreenTable<T>& greens,
                int x, const Multiset& X) {
  const int n = int(g.size());
  if (x < 0 || x >= n) throw domain_error("site index out of range");
  for (int v : X)
    if (v < 0 || v >= n) throw domain_error("site index out of range");
  if (greens.kind != GreenKind::ordinary)
    throw domain_error("ds_residual expects ordinary greens");

  T lhs = greens.at(ms_union(X, {x}));

  T drop{};
  size_t i = 0;
  while (i < X.size()) {  // one term per distinct label, weighted by multiplicity
    size_t j = i;
    while (j < X.size() && X[j] == X[i]) ++j;
    T mult = T(double(j - i));
    drop = drop + mult * g[x][X[i]] * greens.at(ms_minus_one(X, X[i]));
    i = j;
  }

  T vert{};
  for (const auto& [V, coeff] : vertices) {
    // V = {y} + Y for each distinct y in V
    size_t a = 0;
    while (a < V.size()) {
      size_t b = a;
      while (b < V.size() && V[b] == V[a]) ++b;
      int y = V[a];
      Multiset Y = ms_minus_one(V, y);
      T w = coeff / T(double(ms_symmetry(Y)));
      vert = vert + g[x][y] * w * greens.at(ms_union(X, Y));
      a = b;
    }
  }
  return lhs - drop - vert;
}

double ds_residual(const FieldModel& m, const GreenTable<double>& greens, int x,
                   const Multiset& X);

// ---------- legendre duality ----------

struct LegendreOptions {
  int grid_points = 2001;
  double fd_step = 1e-3;
  double newton_tol = 1e-11;
  int newton_max = 80;
};

struct LegendreReport {
  std::vector<std::vector<double>> wpp;  // second source derivatives of ln Xi
  std::vector<std::vector<double>> gpp;  // second field derivatives of the transform
  std::vector<double> phi_bar;
  double max_dev = 0;  // max |(wpp gpp + identity)_{ij}|
};

LegendreReport legendre_duality_check(const FieldModel& m, const std::vector<double>& J,
                                      const LegendreOptions& opt = {});

struct SelfEnergyReport {
  double c2 = 0;  // connected two-point value
  double pi = 0;  // precision shift: 1/g - 1/c2
  std::vector<double> partial_errors;  // |c2 - S_k|, k = 1..3
};

// single-site models: geometric resummation of the two-point function
SelfEnergyReport self_energy_series_check(const FieldModel& m, int grid_points = 2001);

// ---------- hierarchy expansion of cumulants ----------

enum class UpsilonNorm { root_leg_inside, root_leg_outside };

template <class T>
struct HierarchyExpansion {
  std::vector<Hierarchy> terms;  // hierarchies on positions 0..|X|-1
  std::vector<T> term_values;
  T total{};
};

namespace detail {

// value of one hierarchy node contracted against external index lambda:
// leaves pull a covariance line, internal nodes pull a vertex joining the
// node line to each child subtree
template <class T>
T hier_eval(const Hierarchy::Node& node, int lambda, const Multiset& X,
            const std::map<Multiset, T>& gamma_bar,
            const std::vector<std::vector<T>>& cov2, int n_labels) {
  if (node.children.empty()) return cov2[lambda][X[node.elems[0]]];
  const int m = int(node.children.size());
  std::vector<std::vector<T>> child(m);
  for (int j = 0; j < m; ++j) {
    child[j].reserve(n_labels);
    for (int z = 0; z < n_labels; ++z)
      child[j].push_back(hier_eval(node.children[j], z, X, gamma_bar, cov2, n_labels));
  }
  T total{};
  std::vector<int> zs(m, 0);
  for (int q = 0; q < n_labels; ++q) {
    std::fill(zs.begin(), zs.end(), 0);
    while (true) {
      Multiset key;
      key.reserve(m + 1);
      key.push_back(q);
      for (int z : zs) key.push_back(z);
      std::sort(key.begin(), key.end());
      auto it = gamma_bar.find(key);
      if (it == gamma_bar.end()) throw domain_error("effective vertex missing " + ms_key(key));
      T term = cov2[lambda][q] * it->second;
      for (int j = 0; j < m; ++j) term = term * child[j][zs[j]];
      total = total + term;
      int j = m - 1;
      while (j >= 0 && zs[j] == n_labels - 1) zs[j--] = 0;
      if (j < 0) break;
      ++zs[j];
    }
  }
  return total;
}

// same contraction with the root covariance line factored to the outside
template <class T>
T hier_eval_outside(const Hierarchy::Node& root, int y, const Multiset& X,
                    const std::map<Multiset, T>& gamma_bar,
                    const std::vector<std::vector<T>>& cov2, int n_labels) {
  if (root.children.empty()) return cov2[y][X[root.elems[0]]];
  const int m = int(root.children.size());
  std::vector<std::vector<T>> child(m);
  for (int j = 0; j < m; ++j) {
    child[j].reserve(n_labels);
    for (int z = 0; z < n_labels; ++z)
      child[j].push_back(hier_eval(root.children[j], z, X, gamma_bar, cov2, n_labels));
  }
  T total{};
  for (int p = 0; p < n_labels; ++p) {
    T inner{};
    std::vector<int> zs(m, 0);
    while (true) {
      Multiset key;
      key.reserve(m + 1);
      key.push_back(p);
      for (int z : zs) key.push_back(z);
      std::sort(key.begin(), key.end());
      auto it = gamma_bar.find(key);
      if (it == gamma_bar.end()) throw domain_error("effective vertex missing " + ms_key(key));
      T term = it->second;
      for (int j = 0; j < m; ++j) term = term * child[j][zs[j]];
      inner = inner + term;
      int j = m - 1;
      while (j >= 0 && zs[j] == n_labels - 1) zs[j--] = 0;
      if (j < 0) break;
      ++zs[j];
    }
    total = total + cov2[y][p] * inner;
  }
  return total;
}

}  // namespace detail

// Tree-sum form of the order-(|X|+1) connected function <<phi_y phi_X>>:
// one term per hierarchy on the positions of X. The norm flag only moves the
// root covariance line between the term evaluators; totals agree.
template <class T>
HierarchyExpansion<T> hierarchy_cumulant_expansion(
    int y, const Multiset& X, const std::map<Multiset, T>& gamma_bar,
    const std::vector<std::vector<T>>& cov2, int n_labels,
    UpsilonNorm norm = UpsilonNorm::root_leg_inside) {
  if (X.size() < 2) throw domain_error("hierarchy expansion needs |X| >= 2");
  if (X.size() > 6) throw capacity_error("hierarchy expansion beyond |X| = 6");
  if (y < 0 || y >= n_labels) throw domain_error("site index out of range");
  for (int v : X)
    if (v < 0 || v >= n_labels) throw domain_error("site index out of range");

  HierarchyExpansion<T> out;
  HierarchyStream hs(detail::positions(int(X.size())));
  while (auto h = hs.next()) {
    T val = (norm == UpsilonNorm::root_leg_inside)
                ? detail::hier_eval(h->root, y, X, gamma_bar, cov2, n_labels)
                : detail::hier_eval_outside(h->root, y, X, gamma_bar, cov2, n_labels);
    out.total = out.total + val;
    out.term_values.push_back(std::move(val));
    out.terms.push_back(std::move(*h));
  }
  return out;
}

// One level of the recurrence the hierarchy sum closes: partition X properly,
// join the parts through one vertex, recurse on each part with a fresh line.
template <class T>
T cumulant_by_recurrence(int y, const Multiset& X, const std::map<Multiset, T>& gamma_bar,
                         const std::vector<std::vector<T>>& cov2, int n_labels) {
  if (X.empty()) throw domain_error("cumulant recurrence needs |X| >= 1");
  if (X.size() == 1) return cov2[y][X[0]];
  if (X.size() > 6) throw capacity_error("cumulant recurrence beyond |X| = 6");
  T total{};
  PartitionStream ps(detail::positions(int(X.size())));
  while (auto p = ps.next()) {
    if (p->block_count() < 2) continue;  // proper partitions only
    const int m = p->block_count();
    std::vector<std::vector<T>> part(m);
    for (int j = 0; j < m; ++j) {
      Multiset sub = detail::block_labels(X, p->blocks[j]);
      part[j].reserve(n_labels);
      for (int z = 0; z < n_labels; ++z)
        part[j].push_back(cumulant_by_recurrence(z, sub, gamma_bar, cov2, n_labels));
    }
    std::vector<int> zs(m, 0);
    for (int q = 0; q < n_labels; ++q) {
      std::fill(zs.begin(), zs.end(), 0);
      while (true) {
        Multiset key;
        key.reserve(m + 1);
        key.push_back(q);
        for (int z : zs) key.push_back(z);
        std::sort(key.begin(), key.end());
        auto it = gamma_bar.find(key);
        if (it == gamma_bar.end())
          throw domain_error("effective vertex missing " + ms_key(key));
        T term = cov2[y][q] * it->second;
        for (int j = 0; j < m; ++j) term = term * part[j][zs[j]];
        total = total + term;
        int j = m - 1;
        while (j >= 0 && zs[j] == n_labels - 1) zs[j--] = 0;
        if (j < 0) break;
        ++zs[j];
      }
    }
  }
  return total;
}

// ---------- normal-ordered monomials ----------

// polynomial in field monomials; the empty key is the constant term
template <class T>
struct FieldPolynomial {
  std::map<Multiset, T> coeffs;
};

template <class T>
FieldPolynomial<T> poly_mul(const FieldPolynomial<T>& a, const FieldPolynomial<T>& b) {
  FieldPolynomial<T> r;
  for (const auto& [xa, ca] : a.coeffs)
    for (const auto& [xb, cb] : b.coeffs) {
      T prod = ca * cb;
      auto key = ms_union(xa, xb);
      auto it = r.coeffs.find(key);
      if (it == r.coeffs.end())
        r.coeffs.emplace(std::move(key), std::move(prod));
      else
        it->second = it->second + prod;
    }
  return r;
}

template <class T>
T poly_expectation(const FieldPolynomial<T>& p, const GreenTable<T>& ordinary) {
  if (ordinary.kind != GreenKind::ordinary)
    throw domain_error("poly_expectation expects ordinary greens");
  T acc{};
  for (const auto& [x, c] : p.coeffs) acc = acc + (x.empty() ? c : c * ordinary.at(x));
  return acc;
}

namespace detail {

template <class T>
const FieldPolynomial<T>& wick_rec(const Multiset& X, const GreenTable<T>& ordinary,
                                   const GreenTable<T>& cumulants,
                                   std::map<Multiset, FieldPolynomial<T>>& memo) {
  auto hit = memo.find(X);
  if (hit != memo.end()) return hit->second;
  FieldPolynomial<T> p;
  p.coeffs[X] = T(1);
  p.coeffs[Multiset{}] = T(0) - ordinary.at(X);
  if (X.size() >= 2) {
    PartitionStream ps(positions(int(X.size())));
    while (auto pt = ps.next()) {
      if (pt->block_count() < 2) continue;
      for (int a = 0; a < pt->block_count(); ++a) {
        T weight(1);
        for (int b = 0; b < pt->block_count(); ++b)
          if (b != a) weight = weight * cumulants.at(block_labels(X, pt->blocks[b]));
        const auto& inner =
            wick_rec(block_labels(X, pt->blocks[a]), ordinary, cumulants, memo);
        for (const auto& [k, c] : inner.coeffs) {
          T add = T(0) - weight * c;
          auto it = p.coeffs.find(k);
          if (it == p.coeffs.end())
            p.coeffs.emplace(k, std::move(add));
          else
            it->second = it->second + add;
        }
      }
    }
  }
  return memo.emplace(X, std::move(p)).first->second;
}

}  // namespace detail

// :phi_X: subtracted so that every mixed expectation against lower-order
// normal products vanishes. Needs the ordinary table closed under
// sub-multisets of X.
template <class T>
FieldPolynomial<T> wick_monomial(const GreenTable<T>& ordinary, const Multiset& X) {
  if (X.empty()) throw domain_error("wick_monomial needs |X| >= 1");
  if (X.size() > 8) throw capacity_error("wick_monomial beyond |X| = 8");
  if (ordinary.kind != GreenKind::ordinary)
    throw domain_error("wick_monomial expects ordinary greens");
  // close the cumulant table over the sub-multisets actually used
  GreenTable<T> sub;
  sub.kind = GreenKind::ordinary;
  for (const auto& [k, v] : ordinary.vals)
    if (!k.empty() && std::includes(X.begin(), X.end(), k.begin(), k.end()))
      sub.vals.emplace(k, v);
  GreenTable<T> cumulants = greens_to_cumulants(sub);
  std::map<Multiset, FieldPolynomial<T>> memo;
  return detail::wick_rec(X, ordinary, cumulants, memo);
}

// <:phi_{Y_1}: ... :phi_{Y_m}: phi_X> = sum over partitions of all positions
// with no block inside a single normal-ordered group, cumulant per block
template <class T>
T wick_product_expectation(const std::vector<Multiset>& Ys, const Multiset& X,
                           const GreenTable<T>& cumulants) {
  if (cumulants.kind != GreenKind::cumulant)
    throw domain_error("wick_product_expectation expects cumulants");
  std::vector<int> group;  // 0 = free part, j >= 1 = Y_j
  Multiset all;
  for (size_t j = 0; j < Ys.size(); ++j)
    for (int v : Ys[j]) {
      all.push_back(v);
      group.push_back(int(j) + 1);
    }
  for (int v : X) {
    all.push_back(v);
    group.push_back(0);
  }
  if (all.empty()) return T(1);
  if (all.size() > 12) throw capacity_error("wick expectation beyond 12 positions");

  T acc{};
  PartitionStream ps(detail::positions(int(all.size())));
  while (auto p = ps.next()) {
    bool admissible = true;
    for (const auto& b : p->blocks) {
      int g0 = group[b.front()];
      if (g0 == 0) continue;
      bool inside = true;
      for (int pos : b)
        if (group[pos] != g0) {
          inside = false;
          break;
        }
      if (inside) {
        admissible = false;
        break;
      }
    }
    if (!admissible) continue;
    T term(1);
    for (const auto& b : p->blocks) {
      Multiset lbl;
      lbl.reserve(b.size());
      for (int pos : b) lbl.push_back(all[pos]);
      term = term * cumulants.at(ms_normalized(std::move(lbl)));
    }
    acc = acc + term;
  }
  return acc;
}

// ---------- mean-field iteration ----------

struct TreeExpansionResult {
  std::vector<std::vector<double>> iterates;  // iterates[k] after k sweeps
  bool converged = false;
  double last_delta = 0;
};

// phi_x <- sum_y g_{xy} (J_y + sum_{V owning y} gammaI^V phi^{V\y} / sym);
// raises diagnostic_error when the update norm grows three sweeps running
TreeExpansionResult mean_field_tree_expansion(const FieldModel& m,
                                              const std::map<Multiset, double>& gamma_i,
                                              const std::vector<double>& J, int iterations);

}  // namespace cf
