#include "cf/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cf/combinat.hpp"
#include "cf/errors.hpp"

namespace cf {

cx inner(const TestFunction& f, const TestFunction& g) {
  if (f.dim() != g.dim()) throw domain_error("inner: dimension mismatch");
  cx s = 0;
  for (int d = 0; d < f.dim(); ++d) s += std::conj(f.c[d]) * g.c[d];
  return s;
}

double norm2(const TestFunction& f) {
  double s = 0;
  for (const cx& z : f.c) s += std::norm(z);
  return s;
}

TestFunction conjugated(const TestFunction& f) {
  TestFunction r = f;
  for (cx& z : r.c) z = std::conj(z);
  return r;
}

TestFunction scaled(const TestFunction& f, cx z) {
  TestFunction r = f;
  for (cx& w : r.c) w *= z;
  return r;
}

Letter make_create(TestFunction f) {
  Letter l;
  l.kind = Letter::Kind::create;
  l.f = std::move(f);
  return l;
}

Letter make_annihilate(TestFunction g) {
  Letter l;
  l.kind = Letter::Kind::annihilate;
  l.g = std::move(g);
  return l;
}

Letter make_poisson_vertex(TestFunction f, TestFunction g, int alpha, int beta) {
  if ((alpha != 0 && alpha != 1) || (beta != 0 && beta != 1))
    throw domain_error("poisson vertex flags must be 0 or 1");
  Letter l;
  l.kind = Letter::Kind::poisson_vertex;
  l.f = std::move(f);
  l.g = std::move(g);
  l.alpha = alpha;
  l.beta = beta;
  return l;
}

Letter make_exp_vertex(TestFunction f, TestFunction g) {
  Letter l;
  l.kind = Letter::Kind::exp_vertex;
  l.f = std::move(f);
  l.g = std::move(g);
  return l;
}

namespace {

int common_dim(const VertexWord& word) {
  int d = -1;
  auto see = [&](const TestFunction& t) {
    if (t.dim() == 0) return;
    if (d < 0) d = t.dim();
    if (t.dim() != d) throw domain_error("word mixes test function dimensions");
  };
  for (const auto& l : word.letters) {
    see(l.f);
    see(l.g);
  }
  if (d < 0) throw domain_error("word has no test functions");
  return d;
}

}  // namespace

cx wick_gaussian_expectation(const VertexWord& word) {
  const int n = word.size();
  if (n == 0) return 1;
  if (n > 16) throw capacity_error("wick matching sum beyond 16 letters");
  common_dim(word);

  // application order: last letter first
  std::vector<const Letter*> ops(n);
  for (int i = 0; i < n; ++i) {
    const Letter& l = word.letters[size_t(n) - 1 - i];
    if (l.kind != Letter::Kind::create && l.kind != Letter::Kind::annihilate)
      throw domain_error("gaussian words take create/annihilate letters only");
    ops[i] = &l;
  }

  cx total = 0;
  std::vector<int> open;  // unmatched creator positions, in application order
  auto rec = [&](auto&& self, int pos, cx acc) -> void {
    if (pos == n) {
      if (open.empty()) total += acc;
      return;
    }
    const Letter& l = *ops[pos];
    if (l.kind == Letter::Kind::create) {
      open.push_back(pos);
      self(self, pos + 1, acc);
      open.pop_back();
      return;
    }
    for (size_t j = 0; j < open.size(); ++j) {
      int q = open[j];
      cx factor = inner(l.g, ops[q]->f);
      open.erase(open.begin() + j);
      self(self, pos + 1, acc * factor);
      open.insert(open.begin() + j, q);
    }
  };
  rec(rec, 0, cx(1));
  return total;
}

namespace {

// chain product along one block of application indices (ascending, 1-based):
// prod_j <g of vertex a_j | f of vertex a_{j-1}>
cx block_chain(const std::vector<int>& block, const std::vector<const TestFunction*>& fs,
               const std::vector<const TestFunction*>& gs) {
  cx prod = 1;
  for (size_t j = 1; j < block.size(); ++j)
    prod *= inner(*gs[block[j] - 1], *fs[block[j - 1] - 1]);
  return prod;
}

std::vector<int> iota1(int n) {
  std::vector<int> g(n);
  for (int i = 0; i < n; ++i) g[i] = i + 1;
  return g;
}

}  // namespace

cx poisson_field_expectation(const VertexWord& word) {
  const int n = word.size();
  if (n == 0) return 1;
  if (n > 12) throw capacity_error("poisson partition sum beyond 12 vertices");
  common_dim(word);

  std::vector<const TestFunction*> fs(n), gs(n);
  std::vector<int> alpha(n), beta(n);
  for (int i = 0; i < n; ++i) {  // i = application index - 1
    const Letter& l = word.letters[size_t(n) - 1 - i];
    if (l.kind != Letter::Kind::poisson_vertex)
      throw domain_error("poisson words take poisson_vertex letters only");
    fs[i] = &l.f;
    gs[i] = &l.g;
    alpha[i] = l.alpha;
    beta[i] = l.beta;
  }

  cx total = 0;
  PartitionStream ps(iota1(n));
  while (auto p = ps.next()) {
    bool ok = true;
    for (const auto& b : p->blocks) {
      for (size_t j = 0; j < b.size() && ok; ++j) {
        int v = b[j] - 1;
        int want_alpha, want_beta;
        if (b.size() == 1) {
          want_alpha = 0;
          want_beta = 0;
        } else if (j == 0) {  // block minimum: created, consumed later
          want_alpha = 1;
          want_beta = 0;
        } else if (j + 1 == b.size()) {  // block maximum: annihilates only
          want_alpha = 0;
          want_beta = 1;
        } else {
          want_alpha = 1;
          want_beta = 1;
        }
        ok = alpha[v] == want_alpha && beta[v] == want_beta;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    cx prod = 1;
    for (const auto& b : p->blocks) prod *= block_chain(b, fs, gs);
    total += prod;
  }
  return total;
}

cx poisson_summed_expectation(const std::vector<TestFunction>& fs,
                              const std::vector<TestFunction>& gs) {
  const int n = int(fs.size());
  if (n == 0) return 1;
  if (fs.size() != gs.size()) throw domain_error("vertex function lists differ in length");
  if (n > 12) throw capacity_error("poisson partition sum beyond 12 vertices");
  std::vector<const TestFunction*> fp(n), gp(n);
  for (int i = 0; i < n; ++i) {
    fp[i] = &fs[i];
    gp[i] = &gs[i];
  }
  cx total = 0;
  PartitionStream ps(iota1(n));
  while (auto p = ps.next()) {
    cx prod = 1;
    for (const auto& b : p->blocks) prod *= block_chain(b, fp, gp);
    total += prod;
  }
  return total;
}

double poisson_observable_moment(const TestFunction& f, int n) {
  if (n < 0) throw domain_error("negative moment order");
  double lam = norm2(f);
  if (lam == 0) throw domain_error("poisson observable needs f != 0");
  if (n == 0) return 1;
  double total = 0;
  for (int m = 1; m <= n; ++m)
    total += double(stirling_second(n, m)) * std::pow(lam, n - m);
  return total;
}

cx exponential_field_expectation(
    const std::vector<std::pair<TestFunction, TestFunction>>& pairs) {
  const int n = int(pairs.size());
  if (n == 0) return 1;
  if (n > 10) throw capacity_error("permutation sum beyond 10 vertices");
  cx total = 0;
  CyclePermutationStream cs(n);
  while (auto cp = cs.next()) {
    auto img = cp->image();
    cx prod = 1;
    for (int i = 1; i <= n; ++i) prod *= inner(pairs[img[i - 1] - 1].second, pairs[i - 1].first);
    total += prod;
  }
  return total;
}

double thermal_quadratic_form(const TestFunction& f, const std::vector<double>& rho) {
  if (int(rho.size()) != f.dim()) throw domain_error("occupation density dimension mismatch");
  double s = 0;
  for (int d = 0; d < f.dim(); ++d) {
    if (rho[d] < 0) throw domain_error("occupation density must be >= 0");
    s += (2.0 * rho[d] + 1.0) * std::norm(f.c[d]);
  }
  return s;
}

// ---------- TruncatedSpace ----------

TruncatedSpace::TruncatedSpace(int modes, int M) : modes_(modes), M_(M) {
  if (modes < 1 || M < 0) throw domain_error("TruncatedSpace: bad shape");
  double dim_est = 1;
  for (int i = 1; i <= modes; ++i) dim_est *= double(M + i) / i;
  if (dim_est > 2e6) throw capacity_error("TruncatedSpace dimension too large");

  std::vector<int> occ(modes, 0);
  auto rec = [&](auto&& self, int d, int left) -> void {
    if (d == modes) {
      occ_.push_back(occ);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      occ[d] = k;
      self(self, d + 1, left - k);
    }
    occ[d] = 0;
  };
  rec(rec, 0, M);
  dim_ = int(occ_.size());

  std::map<std::vector<int>, int> index;
  for (int i = 0; i < dim_; ++i) index[occ_[i]] = i;
  up_.assign(modes, std::vector<int>(dim_, -1));
  for (int i = 0; i < dim_; ++i) {
    int total = 0;
    for (int x : occ_[i]) total += x;
    if (total == M) continue;
    std::vector<int> o = occ_[i];
    for (int d = 0; d < modes; ++d) {
      ++o[d];
      up_[d][i] = index.at(o);
      --o[d];
    }
  }
}

std::vector<cx> TruncatedSpace::vacuum() const {
  std::vector<cx> v(dim_, cx(0));
  v[index_of(std::vector<int>(modes_, 0))] = 1;
  return v;
}

int TruncatedSpace::index_of(const std::vector<int>& occ) const {
  for (int i = 0; i < dim_; ++i)
    if (occ_[i] == occ) return i;
  throw domain_error("occupation vector outside the space");
}

std::vector<cx> TruncatedSpace::create(const std::vector<cx>& F, const std::vector<cx>& u) const {
  if (int(F.size()) != modes_ || int(u.size()) != dim_)
    throw domain_error("create: dimension mismatch");
  std::vector<cx> v(dim_, cx(0));
  for (int d = 0; d < modes_; ++d) {
    if (F[d] == cx(0)) continue;
    for (int i = 0; i < dim_; ++i) {
      int j = up_[d][i];
      if (j < 0 || u[i] == cx(0)) continue;
      v[j] += F[d] * std::sqrt(double(occ_[i][d] + 1)) * u[i];
    }
  }
  return v;
}

std::vector<cx> TruncatedSpace::annihilate(const std::vector<cx>& F,
                                           const std::vector<cx>& u) const {
  if (int(F.size()) != modes_ || int(u.size()) != dim_)
    throw domain_error("annihilate: dimension mismatch");
  std::vector<cx> v(dim_, cx(0));
  for (int d = 0; d < modes_; ++d) {
    if (F[d] == cx(0)) continue;
    for (int i = 0; i < dim_; ++i) {
      int j = up_[d][i];  // occ_[j] = occ_[i] + e_d, so b_d maps j back to i
      if (j < 0 || u[j] == cx(0)) continue;
      v[i] += std::conj(F[d]) * std::sqrt(double(occ_[i][d] + 1)) * u[j];
    }
  }
  return v;
}

cx TruncatedSpace::inner(const std::vector<cx>& u, const std::vector<cx>& v) const {
  if (u.size() != v.size()) throw domain_error("inner: dimension mismatch");
  cx s = 0;
  for (size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

namespace {

std::vector<cx> embed(const TestFunction& f, int copy, int d, int modes) {
  std::vector<cx> F(modes, cx(0));
  for (int j = 0; j < d; ++j) F[size_t(copy) * d + j] = f.c[j];
  return F;
}

}  // namespace

cx truncated_oracle(int mode_count, int M, const VertexWord& word) {
  if (mode_count != 1 && mode_count != 2)
    throw domain_error("truncated_oracle: mode_count must be 1 or 2");
  const int d = common_dim(word);

  int creation_depth = 0;
  for (const auto& l : word.letters) {
    switch (l.kind) {
      case Letter::Kind::create:
        creation_depth += 1;
        break;
      case Letter::Kind::annihilate:
        creation_depth += (mode_count == 2) ? 1 : 0;
        break;
      case Letter::Kind::poisson_vertex:
        if (mode_count != 1) throw domain_error("poisson vertices use mode_count 1");
        creation_depth += l.alpha;
        break;
      case Letter::Kind::exp_vertex:
        if (mode_count != 2) throw domain_error("exp vertices use mode_count 2");
        creation_depth += 2;
        break;
    }
  }
  if (M < creation_depth)
    throw precision_error("truncation level below the word's creation depth");

  const int modes = d * mode_count;
  TruncatedSpace sp(modes, M);
  std::vector<cx> v = sp.vacuum();

  auto add = [](std::vector<cx> a, const std::vector<cx>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
  };
  // doubled field: creators act on copy 0, annihilators of the mirrored
  // argument on copy 1; the two halves commute
  auto apply_create = [&](const TestFunction& f, std::vector<cx>& u) {
    if (mode_count == 1) {
      u = sp.create(embed(f, 0, d, modes), u);
    } else {
      u = add(sp.create(embed(f, 0, d, modes), u),
              sp.annihilate(embed(conjugated(f), 1, d, modes), u));
    }
  };
  auto apply_annihilate = [&](const TestFunction& g, std::vector<cx>& u) {
    if (mode_count == 1) {
      u = sp.annihilate(embed(g, 0, d, modes), u);
    } else {
      u = add(sp.annihilate(embed(g, 0, d, modes), u),
              sp.create(embed(conjugated(g), 1, d, modes), u));
    }
  };

  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    switch (it->kind) {
      case Letter::Kind::create:
        apply_create(it->f, v);
        break;
      case Letter::Kind::annihilate:
        apply_annihilate(it->g, v);
        break;
      case Letter::Kind::poisson_vertex:
        if (it->beta) apply_annihilate(it->g, v);
        if (it->alpha) apply_create(it->f, v);
        break;
      case Letter::Kind::exp_vertex:
        apply_annihilate(it->g, v);
        apply_create(it->f, v);
        break;
    }
  }
  return sp.inner(sp.vacuum(), v);
}

cx exponential_vector_inner(const TestFunction& f, const TestFunction& g, int M) {
  if (f.dim() != g.dim()) throw domain_error("dimension mismatch");
  if (M < 0) throw domain_error("negative truncation level");
  cx ip = inner(f, g);
  cx total = 0;
  cx term = 1;
  for (int n = 0; n <= M; ++n) {
    if (n > 0) term *= ip / double(n);
    total += term;
  }
  return total;
}

}  // namespace cf
