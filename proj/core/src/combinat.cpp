#include "cf/combinat.hpp"

#include <algorithm>
#include <map>

#include "cf/errors.hpp"

namespace cf {

namespace {

void check_ground(const std::vector<int>& g) {
  if (g.empty()) throw domain_error("empty ground set");
  for (size_t i = 1; i < g.size(); ++i)
    if (g[i] <= g[i - 1]) throw domain_error("ground labels must be strictly ascending");
}

int ground_pos(const std::vector<int>& g, int label) {
  auto it = std::lower_bound(g.begin(), g.end(), label);
  if (it == g.end() || *it != label) throw domain_error("label not in ground set");
  return int(it - g.begin());
}

}  // namespace

// ---------- SetPartition ----------

std::vector<int> SetPartition::rgs() const {
  std::vector<int> a(ground.size(), -1);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int x : blocks[b]) a[ground_pos(ground, x)] = int(b);
  return a;
}

SetPartition make_partition(std::vector<int> ground, std::vector<std::vector<int>> blocks) {
  std::sort(ground.begin(), ground.end());
  check_ground(ground);
  std::vector<char> seen(ground.size(), 0);
  for (auto& b : blocks) {
    if (b.empty()) throw domain_error("empty block");
    std::sort(b.begin(), b.end());
    for (int x : b) {
      int p = ground_pos(ground, x);
      if (seen[p]) throw domain_error("blocks overlap");
      seen[p] = 1;
    }
  }
  for (char s : seen)
    if (!s) throw domain_error("blocks do not cover the ground set");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return SetPartition{std::move(ground), std::move(blocks)};
}

// ---------- CyclePermutation ----------

std::vector<int> CyclePermutation::image() const {
  std::vector<int> img(n, 0);
  for (const auto& c : cycles)
    for (size_t i = 0; i < c.size(); ++i) img[c[i] - 1] = c[(i + 1) % c.size()];
  return img;
}

CyclePermutation CyclePermutation::from_image(const std::vector<int>& img) {
  int n = int(img.size());
  std::vector<char> perm_check(n, 0);
  for (int v : img) {
    if (v < 1 || v > n || perm_check[v - 1]) throw domain_error("not a permutation");
    perm_check[v - 1] = 1;
  }
  CyclePermutation cp;
  cp.n = n;
  std::vector<char> visited(n, 0);
  for (int s = 1; s <= n; ++s) {
    if (visited[s - 1]) continue;
    std::vector<int> cyc;
    int x = s;
    do {
      cyc.push_back(x);
      visited[x - 1] = 1;
      x = img[x - 1];
    } while (x != s);
    cp.cycles.push_back(std::move(cyc));
  }
  return cp;  // least element leads each cycle and cycles appear by least element
}

// ---------- Hierarchy ----------

namespace {

int node_order(const Hierarchy::Node& nd) {
  int d = 0;
  for (const auto& c : nd.children) d = std::max(d, 1 + node_order(c));
  return d;
}

void node_serialize(const Hierarchy::Node& nd, std::vector<int>& out) {
  if (nd.children.empty()) return;
  out.push_back(int(nd.elems.size()));
  for (int e : nd.elems) out.push_back(e);
  // digits: which child each element landed in (children are in least-element
  // order, so this is exactly the restricted-growth string of the partition)
  for (int e : nd.elems) {
    for (size_t c = 0; c < nd.children.size(); ++c) {
      if (std::binary_search(nd.children[c].elems.begin(), nd.children[c].elems.end(), e)) {
        out.push_back(int(c));
        break;
      }
    }
  }
  for (const auto& c : nd.children) node_serialize(c, out);
}

}  // namespace

int Hierarchy::order() const { return node_order(root); }

std::vector<int> Hierarchy::serialization() const {
  std::vector<int> out;
  node_serialize(root, out);
  return out;
}

// ---------- counting ----------

BigInt stirling_first(int n, int m) {
  if (n < 0) throw domain_error("stirling_first: negative n");
  if (n == 0) return m == 0 ? 1 : 0;
  if (m < 1 || m > n) return 0;
  // s(i+1, j) = s(i, j-1) + i * s(i, j)
  std::vector<BigInt> row(n + 1, 0);
  row[1] = 1;  // s(1,1)
  for (int i = 1; i < n; ++i)
    for (int j = std::min(i + 1, n); j >= 1; --j) row[j] = row[j - 1] + i * row[j];
  return row[m];
}

BigInt stirling_second(int n, int m) {
  if (n < 0) throw domain_error("stirling_second: negative n");
  if (n == 0) return m == 0 ? 1 : 0;
  if (m < 1 || m > n) return 0;
  // S(i+1, j) = S(i, j-1) + j * S(i, j)
  std::vector<BigInt> row(n + 1, 0);
  row[1] = 1;
  for (int i = 1; i < n; ++i)
    for (int j = std::min(i + 1, n); j >= 1; --j) row[j] = row[j - 1] + j * row[j];
  return row[m];
}

std::vector<BigInt> stirling_first_row(int n) {
  std::vector<BigInt> r(n);
  for (int m = 1; m <= n; ++m) r[m - 1] = stirling_first(n, m);
  return r;
}

std::vector<BigInt> stirling_second_row(int n) {
  std::vector<BigInt> r(n);
  for (int m = 1; m <= n; ++m) r[m - 1] = stirling_second(n, m);
  return r;
}

BigInt bell(int n) {
  if (n < 0) throw domain_error("bell: negative n");
  if (n == 0) return 1;
  BigInt b = 0;
  for (int m = 1; m <= n; ++m) b += stirling_second(n, m);
  return b;
}

BigInt pair_partition_count(int n) {
  if (n < 0) throw domain_error("pair_partition_count: negative size");
  if (n % 2 == 1) return 0;
  return odd_double_factorial(n / 2);
}

BigInt hierarchy_count(int n) {
  if (n < 1) throw domain_error("hierarchy_count: n must be >= 1");
  // h_k = sum over proper-partition profiles of rho(profile) * prod h_j^{n_j}
  std::vector<BigInt> h(n + 1);
  h[1] = 1;
  for (int k = 2; k <= n; ++k) {
    BigInt total = 0;
    for (const auto& prof : enumerate_profiles(k)) {
      if (prof.block_count() < 2) continue;
      BigInt term = rho_multiplicity(prof);
      for (size_t j = 1; j <= prof.counts.size(); ++j)
        if (prof.counts[j - 1] > 0) term *= int_pow(h[j], int(prof.counts[j - 1]));
      total += term;
    }
    h[k] = total;
  }
  return h[n];
}

// ---------- PartitionStream ----------

PartitionStream::PartitionStream(std::vector<int> ground, std::optional<int> m,
                                 const Limits& lim)
    : ground_(std::move(ground)), m_(m) {
  check_ground(ground_);
  if (int(ground_.size()) > lim.max_partition_ground)
    throw capacity_error("partition enumeration ground exceeds guard");
  if (m_ && (*m_ < 1 || *m_ > int(ground_.size())))
    throw domain_error("block count out of range");
  a_.assign(ground_.size(), 0);
}

bool PartitionStream::advance_rgs() {
  int n = int(a_.size());
  for (int i = n - 1; i >= 1; --i) {
    std::int8_t pm = 0;
    for (int j = 0; j < i; ++j) pm = std::max(pm, a_[j]);
    if (a_[i] <= pm) {
      ++a_[i];
      std::fill(a_.begin() + i + 1, a_.end(), std::int8_t(0));
      return true;
    }
  }
  return false;
}

std::optional<SetPartition> PartitionStream::next() {
  if (done_) return std::nullopt;
  while (true) {
    if (fresh_) {
      fresh_ = false;
    } else if (!advance_rgs()) {
      done_ = true;
      return std::nullopt;
    }
    int nb = 0;
    for (std::int8_t d : a_) nb = std::max(nb, int(d) + 1);
    if (m_ && nb != *m_) continue;
    SetPartition p;
    p.ground = ground_;
    p.blocks.assign(nb, {});
    for (size_t i = 0; i < a_.size(); ++i) p.blocks[a_[i]].push_back(ground_[i]);
    return p;
  }
}

// ---------- PairPartitionStream ----------

PairPartitionStream::PairPartitionStream(std::vector<int> ground, const Limits& lim)
    : ground_(std::move(ground)) {
  std::sort(ground_.begin(), ground_.end());
  for (size_t i = 1; i < ground_.size(); ++i)
    if (ground_[i] == ground_[i - 1]) throw domain_error("duplicate ground label");
  if (int(ground_.size()) > lim.max_partition_ground)
    throw capacity_error("pair partition enumeration ground exceeds guard");
  partner_.assign(ground_.size(), -1);
}

bool PairPartitionStream::complete() {
  int n = int(partner_.size());
  size_t mark = stack_.size();
  while (true) {
    int q = 0;
    while (q < n && partner_[q] != -1) ++q;
    if (q == n) return true;  // everything paired
    int p = q + 1;
    while (p < n && partner_[p] != -1) ++p;
    if (p == n) {
      // odd leftover: undo this attempt's pairs
      while (stack_.size() > mark) {
        auto [uq, up] = stack_.back();
        stack_.pop_back();
        partner_[uq] = partner_[up] = -1;
      }
      return false;
    }
    partner_[q] = p;
    partner_[p] = q;
    stack_.push_back({q, p});
  }
}

bool PairPartitionStream::backtrack() {
  int n = int(partner_.size());
  while (!stack_.empty()) {
    auto [q, p] = stack_.back();
    stack_.pop_back();
    partner_[q] = partner_[p] = -1;
    for (int np = p + 1; np < n; ++np) {
      if (partner_[np] != -1) continue;
      partner_[q] = np;
      partner_[np] = q;
      stack_.push_back({q, np});
      if (complete()) return true;
      stack_.pop_back();
      partner_[q] = partner_[np] = -1;
    }
  }
  return false;
}

std::optional<PairPartition> PairPartitionStream::next() {
  if (done_) return std::nullopt;
  bool have;
  if (fresh_) {
    fresh_ = false;
    have = ground_.size() % 2 == 0 && complete();
  } else {
    have = backtrack();
  }
  if (!have) {
    done_ = true;
    return std::nullopt;
  }
  PairPartition pp;
  pp.ground = ground_;
  for (auto [q, p] : stack_) pp.pairs.push_back({ground_[p], ground_[q]});
  return pp;
}

// ---------- CyclePermutationStream ----------

CyclePermutationStream::CyclePermutationStream(int n, std::optional<int> m, const Limits& lim)
    : n_(n), m_(m) {
  if (n < 1) throw domain_error("cycle permutations: n must be >= 1");
  if (n > lim.max_partition_ground)
    throw capacity_error("cycle permutation enumeration exceeds guard");
  img_.resize(n);
  for (int i = 0; i < n; ++i) img_[i] = i + 1;
}

std::optional<CyclePermutation> CyclePermutationStream::next() {
  if (done_) return std::nullopt;
  while (true) {
    if (fresh_) {
      fresh_ = false;
    } else if (!std::next_permutation(img_.begin(), img_.end())) {
      done_ = true;
      return std::nullopt;
    }
    CyclePermutation cp = CyclePermutation::from_image(img_);
    if (m_ && int(cp.cycles.size()) != *m_) continue;
    return cp;
  }
}

// ---------- HierarchyCursor ----------

HierarchyCursor::HierarchyCursor(int n, const Limits& lim) : n_(n) {
  if (n < 1) throw domain_error("hierarchy enumeration: empty ground");
  if (n > lim.max_hierarchy_ground) throw capacity_error("hierarchy enumeration exceeds guard");
  arena_.resize(size_t(n) * (n + 1));
  digits_.resize(size_t(n) * n + 1);
  pmax_.resize(digits_.size());
  pending_.reserve(n + 1);
  frames_.reserve(n + 1);
  if (n >= 3) {  // n <= 2 has a single hierarchy and no choices to track
    for (int i = 0; i < n; ++i) arena_[i] = i;
    arena_top_ = n;
    pending_.push_back({0, n});
  }
}

void HierarchyCursor::first_rgs(Frame& f) {
  std::int8_t* d = digits_.data() + f.rgs_ofs;
  std::int8_t* pm = pmax_.data() + f.rgs_ofs;
  std::fill(d, d + f.k - 1, std::int8_t(0));
  std::fill(pm, pm + f.k - 1, std::int8_t(0));
  d[f.k - 1] = 1;  // first proper partition in rgs-lex order: 0..0,1
  pm[f.k - 1] = 1;
}

bool HierarchyCursor::next_rgs(Frame& f) {
  std::int8_t* d = digits_.data() + f.rgs_ofs;
  std::int8_t* pm = pmax_.data() + f.rgs_ofs;
  for (int i = f.k - 1; i >= 1; --i) {
    if (d[i] <= pm[i - 1]) {
      ++d[i];
      std::int8_t m = pm[i - 1] < d[i] ? d[i] : pm[i - 1];
      pm[i] = m;
      for (int j = i + 1; j < f.k; ++j) {
        d[j] = 0;
        pm[j] = m;
      }
      return true;
    }
  }
  return false;
}

void HierarchyCursor::apply(Frame& f) {
  const std::int8_t* d = digits_.data() + f.rgs_ofs;
  const int* elems = arena_.data() + f.elems_ofs;
  const int nb = int(pmax_[f.rgs_ofs + f.k - 1]) + 1;
  int sizes[16];
  for (int b = 0; b < nb; ++b) sizes[b] = 0;
  for (int i = 0; i < f.k; ++i) ++sizes[d[i]];
  // Children of size <= 2 expand exactly one way (leaf, or a forced pair of
  // singleton leaves), so only size >= 3 children get an arena copy and a
  // pending entry. Frames therefore exist only where there is a choice.
  int fill[16];
  int acc = arena_top_;
  for (int b = 0; b < nb; ++b) {
    if (sizes[b] >= 3) {
      fill[b] = acc;
      acc += sizes[b];
    } else {
      fill[b] = -1;
    }
  }
  for (int i = 0; i < f.k; ++i) {
    int b = d[i];
    if (fill[b] >= 0) arena_[fill[b]++] = elems[i];
  }
  arena_top_ = acc;
  // push in reverse so the least-element child expands first
  f.pushed = 0;
  for (int b = nb - 1; b >= 0; --b) {
    if (sizes[b] >= 3) {
      pending_.push_back({fill[b] - sizes[b], sizes[b]});
      ++f.pushed;
    }
  }
}

void HierarchyCursor::unapply(Frame& f) {
  pending_.resize(pending_.size() - f.pushed);
  arena_top_ = f.kids_ofs;
}

void HierarchyCursor::descend() {
  while (!pending_.empty()) {
    auto [ofs, k] = pending_.back();
    pending_.pop_back();
    Frame f;
    f.elems_ofs = ofs;
    f.k = k;
    f.rgs_ofs = digits_top_;
    f.kids_ofs = arena_top_;
    f.pushed = 0;
    digits_top_ += k;
    first_rgs(f);
    apply(f);
    frames_.push_back(f);
  }
}

bool HierarchyCursor::advance() {
  if (done_) return false;
  if (fresh_) {
    fresh_ = false;
    descend();  // no-op for n == 1: the trivial one-leaf hierarchy
    return true;
  }
  while (!frames_.empty()) {
    Frame& f = frames_.back();
    unapply(f);
    if (next_rgs(f)) {
      apply(f);
      descend();
      return true;
    }
    // options exhausted: restore the node as pending and unwind one level
    pending_.push_back({f.elems_ofs, f.k});
    digits_top_ -= f.k;
    frames_.pop_back();
  }
  done_ = true;
  return false;
}

Hierarchy HierarchyCursor::current(const std::vector<int>& ground) const {
  if (int(ground.size()) != n_) throw domain_error("ground size mismatch");
  Hierarchy h;
  h.ground = ground;
  size_t cursor = 0;
  // frames_ lists internal nodes in preorder; rebuild the tree by consuming
  // them in that order
  auto build = [&](auto&& self, std::vector<int> idx) -> Hierarchy::Node {
    Hierarchy::Node nd;
    nd.elems.reserve(idx.size());
    for (int i : idx) nd.elems.push_back(ground[i]);
    if (idx.size() == 1) return nd;
    if (idx.size() == 2) {  // forced split; the cursor keeps no frame for it
      nd.children.push_back(Hierarchy::Node{{ground[idx[0]]}, {}});
      nd.children.push_back(Hierarchy::Node{{ground[idx[1]]}, {}});
      return nd;
    }
    const Frame& f = frames_[cursor++];
    const std::int8_t* d = digits_.data() + f.rgs_ofs;
    int nb = 0;
    for (int i = 0; i < f.k; ++i) nb = std::max(nb, int(d[i]) + 1);
    std::vector<std::vector<int>> kids(nb);
    for (int i = 0; i < f.k; ++i) kids[d[i]].push_back(idx[i]);
    for (auto& kid : kids) nd.children.push_back(self(self, std::move(kid)));
    return nd;
  };
  std::vector<int> all(n_);
  for (int i = 0; i < n_; ++i) all[i] = i;
  h.root = build(build, std::move(all));
  return h;
}

// ---------- HierarchyStream ----------

HierarchyStream::HierarchyStream(std::vector<int> ground, const Limits& lim)
    : ground_(std::move(ground)), cur_((check_ground(ground_), int(ground_.size())), lim) {}

std::optional<Hierarchy> HierarchyStream::next() {
  if (!cur_.advance()) return std::nullopt;
  return cur_.current(ground_);
}

// ---------- eager wrappers ----------

std::vector<SetPartition> enumerate_partitions(const std::vector<int>& ground,
                                               std::optional<int> m, const Limits& lim) {
  std::vector<SetPartition> out;
  PartitionStream s(ground, m, lim);
  while (auto p = s.next()) out.push_back(std::move(*p));
  return out;
}

std::vector<PairPartition> enumerate_pair_partitions(const std::vector<int>& ground,
                                                     const Limits& lim) {
  std::vector<PairPartition> out;
  PairPartitionStream s(ground, lim);
  while (auto p = s.next()) out.push_back(std::move(*p));
  return out;
}

std::vector<CyclePermutation> enumerate_cycle_permutations(int n, std::optional<int> m,
                                                           const Limits& lim) {
  std::vector<CyclePermutation> out;
  CyclePermutationStream s(n, m, lim);
  while (auto p = s.next()) out.push_back(std::move(*p));
  return out;
}

std::vector<Hierarchy> enumerate_hierarchies(const std::vector<int>& ground,
                                             const Limits& lim) {
  std::vector<Hierarchy> out;
  HierarchyStream s(ground, lim);
  while (auto h = s.next()) out.push_back(std::move(*h));
  return out;
}

// ---------- partition lattice ----------

namespace {

// maps each fine block to the index of the coarse block containing it, or
// returns false when the partitions are not comparable
bool refine_map(const SetPartition& coarse, const SetPartition& fine, std::vector<int>& out) {
  if (coarse.ground != fine.ground) return false;
  std::map<int, int> owner;  // label -> coarse block index
  for (size_t b = 0; b < coarse.blocks.size(); ++b)
    for (int x : coarse.blocks[b]) owner[x] = int(b);
  out.clear();
  for (const auto& fb : fine.blocks) {
    int o = owner.at(fb.front());
    for (int x : fb)
      if (owner.at(x) != o) return false;
    out.push_back(o);
  }
  return true;
}

}  // namespace

bool is_coarsening(const SetPartition& coarse, const SetPartition& fine) {
  std::vector<int> m;
  return refine_map(coarse, fine, m);
}

BigInt mobius_factor(const SetPartition& coarse, const SetPartition& fine) {
  std::vector<int> owner_of_fine;
  if (!refine_map(coarse, fine, owner_of_fine))
    throw domain_error("mobius_factor: partitions not comparable");
  std::vector<int> k(coarse.blocks.size(), 0);
  for (int o : owner_of_fine) ++k[o];
  BigInt f = 1;
  for (int kb : k) {
    BigInt blockfac = factorial(kb - 1);
    if ((kb - 1) % 2 == 1) blockfac = -blockfac;
    f *= blockfac;
  }
  return f;
}

// ---------- occupation profiles ----------

long long OccupationProfile::block_count() const {
  long long n = 0;
  for (long long c : counts) n += c;
  return n;
}

long long OccupationProfile::element_count() const {
  long long e = 0;
  for (size_t j = 0; j < counts.size(); ++j) e += (long long)(j + 1) * counts[j];
  return e;
}

OccupationProfile occupation_stats(const SetPartition& p) {
  size_t mx = 0;
  for (const auto& b : p.blocks) mx = std::max(mx, b.size());
  OccupationProfile prof;
  prof.counts.assign(mx, 0);
  for (const auto& b : p.blocks) ++prof.counts[b.size() - 1];
  return prof;
}

BigInt rho_multiplicity(const OccupationProfile& profile) {
  for (long long c : profile.counts)
    if (c < 0) throw domain_error("negative occupation count");
  long long E = profile.element_count();
  if (E > 1000) throw capacity_error("occupation profile too large");
  BigInt num = factorial(int(E));
  BigInt den = 1;
  for (size_t j = 1; j <= profile.counts.size(); ++j) {
    long long nj = profile.counts[j - 1];
    if (nj == 0) continue;
    den *= int_pow(factorial(int(j)), int(nj));
    den *= factorial(int(nj));
  }
  return num / den;  // exact: den divides num
}

std::vector<OccupationProfile> enumerate_profiles(int E, std::optional<int> N) {
  if (E < 0) throw domain_error("enumerate_profiles: negative element count");
  std::vector<OccupationProfile> out;
  std::vector<long long> counts(E, 0);
  // choose multiplicities from the largest block size down
  auto rec = [&](auto&& self, int j, int remaining, long long blocks) -> void {
    if (j == 0) {
      if (remaining == 0 && (!N || blocks == *N)) {
        OccupationProfile p;
        size_t mx = counts.size();
        while (mx > 0 && counts[mx - 1] == 0) --mx;
        p.counts.assign(counts.begin(), counts.begin() + mx);
        out.push_back(std::move(p));
      }
      return;
    }
    for (int c = 0; c * j <= remaining; ++c) {
      counts[j - 1] = c;
      self(self, j - 1, remaining - c * j, blocks + c);
    }
    counts[j - 1] = 0;
  };
  if (E == 0) {
    if (!N || *N == 0) out.push_back(OccupationProfile{});
    return out;
  }
  rec(rec, E, E, 0);
  return out;
}

Rational bell_polynomial(int n, int m, const std::vector<Rational>& z) {
  if (n < 1 || m < 1 || m > n) throw domain_error("bell_polynomial: need 1 <= m <= n");
  if (int(z.size()) < n - m + 1) throw domain_error("bell_polynomial: z sequence too short");
  Rational total = 0;
  for (const auto& prof : enumerate_profiles(n, m)) {
    Rational term(rho_multiplicity(prof));
    for (size_t j = 1; j <= prof.counts.size(); ++j)
      if (prof.counts[j - 1] > 0) term *= int_pow(z[j - 1], int(prof.counts[j - 1]));
    total += term;
  }
  return total;
}

}  // namespace cf
