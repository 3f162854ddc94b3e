#pragma once

#include <utility>
#include <vector>

#include "cf/numeric.hpp"

namespace cf {

// Finitely supported test function; component d is the coefficient of mode d.
struct TestFunction {
  std::vector<cx> c;
  int dim() const { return int(c.size()); }
};

// conjugate-linear in the first slot
cx inner(const TestFunction& f, const TestFunction& g);
double norm2(const TestFunction& f);  // <f|f>
TestFunction conjugated(const TestFunction& f);
TestFunction scaled(const TestFunction& f, cx z);

// One operator letter. Words list letters left to right as written, so the
// LAST letter acts on the vacuum first.
struct Letter {
  enum class Kind { create, annihilate, poisson_vertex, exp_vertex };
  Kind kind = Kind::create;
  TestFunction f;  // creator payload
  TestFunction g;  // annihilator payload
  // poisson_vertex exposes B+(f)^alpha B-(g)^beta with flags in {0,1}
  int alpha = 1, beta = 1;
};

Letter make_create(TestFunction f);
Letter make_annihilate(TestFunction g);
Letter make_poisson_vertex(TestFunction f, TestFunction g, int alpha, int beta);
// N(f,g) = B+(f) B-(g) on the doubled space where the two halves commute
Letter make_exp_vertex(TestFunction f, TestFunction g);

struct VertexWord {
  std::vector<Letter> letters;
  int size() const { return int(letters.size()); }
};

// Vacuum expectation of a creator/annihilator word: sum over complete
// matchings of each annihilator with an earlier-acting creator, factor
// <g_p | f_q> per pair. Unbalanced words give 0.
cx wick_gaussian_expectation(const VertexWord& word);

// Vacuum expectation of one flagged poisson-vertex word: the partition sum
// restricted to partitions whose block minima create only, maxima annihilate
// only, interior points do both and singletons neither.
cx poisson_field_expectation(const VertexWord& word);

// Sum over all flag assignments, i.e. the vacuum expectation of
// prod_i (1 + B+(f_i)) (1 + B-(g_i)). fs[i], gs[i] belong to the vertex
// applied (i+1)-th. Equals the unrestricted partition sum with chain weights
// <g_later | f_earlier> along each block.
cx poisson_summed_expectation(const std::vector<TestFunction>& fs,
                              const std::vector<TestFunction>& gs);

// n-th vacuum moment of (1 + B+(f)) (1 + B-(f)):
// sum_m S(n,m) <f|f>^{n-m}. At <f|f> = 1 these are the bell numbers.
double poisson_observable_moment(const TestFunction& f, int n);

// Vacuum expectation of prod_i N(f_i, g_i) over commuting doubled modes:
// permanent of the matrix <g_i | f_j>, evaluated as a sum over permutations
// of cycle chain products. pairs[i] = (f_{i+1}, g_{i+1}).
cx exponential_field_expectation(
    const std::vector<std::pair<TestFunction, TestFunction>>& pairs);

// <f | (2 rho + 1) f> for a diagonal occupation density rho >= 0
double thermal_quadratic_form(const TestFunction& f, const std::vector<double>& rho);

// ---------- truncated occupation-number oracle ----------

// Dense state space over `modes` oscillator modes, keeping occupation vectors
// with total <= M. Used as an independent cross-check: operator words are
// applied literally, no combinatorial identities involved.
class TruncatedSpace {
 public:
  TruncatedSpace(int modes, int M);
  int modes() const { return modes_; }
  int levels() const { return M_; }
  int dim() const { return dim_; }
  std::vector<cx> vacuum() const;
  // (sum_d F_d b_d^+) u; components pushed past total occupation M are cut
  std::vector<cx> create(const std::vector<cx>& F, const std::vector<cx>& u) const;
  // (sum_d conj(F_d) b_d) u
  std::vector<cx> annihilate(const std::vector<cx>& F, const std::vector<cx>& u) const;
  cx inner(const std::vector<cx>& u, const std::vector<cx>& v) const;
  const std::vector<int>& occupation(int i) const { return occ_[i]; }
  int index_of(const std::vector<int>& occ) const;

 private:
  int modes_, M_, dim_;
  std::vector<std::vector<int>> occ_;
  std::vector<std::vector<int>> up_;  // up_[d][i] = index of occ + e_d, -1 past cap
};

// Vacuum expectation of `word` evaluated on the truncated space.
// mode_count 1 applies letters as plain creators/annihilators; mode_count 2
// uses the doubled commuting construction (creators act on the first copy,
// annihilators of the mirrored argument on the second). M must cover the
// creation depth of the word so truncation is exact.
cx truncated_oracle(int mode_count, int M, const VertexWord& word);

// <eps(f) | eps(g)> truncated at total occupation M: sum_{n<=M} <f|g>^n / n!
cx exponential_vector_inner(const TestFunction& f, const TestFunction& g, int M);

}  // namespace cf
