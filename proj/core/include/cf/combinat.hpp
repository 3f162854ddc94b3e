#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cf/numeric.hpp"

namespace cf {

// Enumeration guards; requests above these sizes raise capacity_error.
struct Limits {
  int max_partition_ground = 14;
  int max_hierarchy_ground = 10;
};

// Partition of a finite label set into disjoint nonempty blocks.
// Canonical form: labels ascend within a block, blocks ordered by least element.
struct SetPartition {
  std::vector<int> ground;
  std::vector<std::vector<int>> blocks;

  int block_count() const { return int(blocks.size()); }
  // restricted-growth encoding relative to ascending ground order
  std::vector<int> rgs() const;
  bool operator==(const SetPartition&) const = default;
};

// Validates blocks against ground and puts everything in canonical form.
SetPartition make_partition(std::vector<int> ground, std::vector<std::vector<int>> blocks);

// Perfect matching of an even-sized label set. Pairs are (p, q) with p > q,
// listed by ascending q.
struct PairPartition {
  std::vector<int> ground;
  std::vector<std::pair<int, int>> pairs;
  bool operator==(const PairPartition&) const = default;
};

// Permutation of {1..n} in canonical cycle form: each cycle rotated so its
// least element leads, cycles ordered by least element.
struct CyclePermutation {
  int n = 0;
  std::vector<std::vector<int>> cycles;
  std::vector<int> image() const;  // one-line form, image[i-1] = sigma(i)
  static CyclePermutation from_image(const std::vector<int>& img);
  bool operator==(const CyclePermutation&) const = default;
};

// Rooted tree of nested proper partitions: the root carries the ground set,
// every internal node's children partition it into >= 2 parts, leaves are the
// singletons.
struct Hierarchy {
  struct Node {
    std::vector<int> elems;        // ascending
    std::vector<Node> children;    // ordered by least element; empty iff leaf
  };
  std::vector<int> ground;
  Node root;

  int order() const;  // edge count of the longest root-to-leaf chain
  // preorder key (per internal node: size, elements, partition digits);
  // stream emission order is ascending lex on this
  std::vector<int> serialization() const;
};

// Block-size census of a partition: counts[j-1] = number of blocks of size j.
struct OccupationProfile {
  std::vector<long long> counts;
  long long block_count() const;    // N
  long long element_count() const;  // E
  bool operator==(const OccupationProfile&) const = default;
};

// ---------- counting ----------

BigInt stirling_first(int n, int m);  // unsigned
BigInt stirling_second(int n, int m);
std::vector<BigInt> stirling_first_row(int n);   // m = 1..n
std::vector<BigInt> stirling_second_row(int n);  // m = 1..n
BigInt bell(int n);
BigInt pair_partition_count(int n);  // 0 for odd n
// profile recursion over proper partitions; independent of the enumerator
BigInt hierarchy_count(int n);

// ---------- lazy streams (independent cursors) ----------

class PartitionStream {
 public:
  explicit PartitionStream(std::vector<int> ground, std::optional<int> m = std::nullopt,
                           const Limits& lim = {});
  std::optional<SetPartition> next();

 private:
  bool advance_rgs();
  std::vector<int> ground_;
  std::optional<int> m_;
  std::vector<std::int8_t> a_;
  bool fresh_ = true, done_ = false;
};

class PairPartitionStream {
 public:
  explicit PairPartitionStream(std::vector<int> ground, const Limits& lim = {});
  std::optional<PairPartition> next();

 private:
  bool complete();   // greedily pair smallest free elements
  bool backtrack();  // undo last pair, try the next partner
  std::vector<int> ground_;
  std::vector<int> partner_;                // position -> paired position, -1 free
  std::vector<std::pair<int, int>> stack_;  // chosen pairs (q_pos, p_pos) in order
  bool fresh_ = true, done_ = false;
};

class CyclePermutationStream {
 public:
  explicit CyclePermutationStream(int n, std::optional<int> m = std::nullopt,
                                  const Limits& lim = {});
  std::optional<CyclePermutation> next();

 private:
  int n_;
  std::optional<int> m_;
  std::vector<int> img_;
  bool fresh_ = true, done_ = false;
};

// Iterative depth-first cursor over hierarchies on {0..n-1}. Allocation-free
// after construction, so counting sweeps cost a few dozen ns per item.
// Emission order is ascending lex on Hierarchy::serialization().
class HierarchyCursor {
 public:
  explicit HierarchyCursor(int n, const Limits& lim = {});
  bool advance();  // step to the next hierarchy; the first call reaches the first
  Hierarchy current(const std::vector<int>& ground) const;

 private:
  struct Frame {
    int elems_ofs, k;  // node elements: arena_[elems_ofs .. elems_ofs+k)
    int rgs_ofs;       // partition digits: digits_[rgs_ofs .. rgs_ofs+k)
    int kids_ofs;      // children elements materialized from arena_[kids_ofs)
    int pushed;        // internal children currently on the pending stack
  };
  void first_rgs(Frame& f);
  bool next_rgs(Frame& f);
  void apply(Frame& f);    // materialize children, push internal ones pending
  void unapply(Frame& f);  // pop this frame's pending children, free its kid arena
  void descend();          // expand pending nodes until none remain

  int n_;
  std::vector<int> arena_;  // element scratch, stack-disciplined
  int arena_top_ = 0;
  std::vector<std::int8_t> digits_;  // rgs scratch, stack-disciplined
  std::vector<std::int8_t> pmax_;    // running prefix max of each rgs window
  int digits_top_ = 0;
  std::vector<std::pair<int, int>> pending_;  // (elems_ofs, k), top = back
  std::vector<Frame> frames_;                 // chronological = preorder
  bool fresh_ = true, done_ = false;
};

class HierarchyStream {
 public:
  explicit HierarchyStream(std::vector<int> ground, const Limits& lim = {});
  std::optional<Hierarchy> next();

 private:
  std::vector<int> ground_;
  HierarchyCursor cur_;
};

// ---------- eager wrappers ----------

std::vector<SetPartition> enumerate_partitions(const std::vector<int>& ground,
                                               std::optional<int> m = std::nullopt,
                                               const Limits& lim = {});
std::vector<PairPartition> enumerate_pair_partitions(const std::vector<int>& ground,
                                                     const Limits& lim = {});
std::vector<CyclePermutation> enumerate_cycle_permutations(
    int n, std::optional<int> m = std::nullopt, const Limits& lim = {});
std::vector<Hierarchy> enumerate_hierarchies(const std::vector<int>& ground,
                                             const Limits& lim = {});

// ---------- partition lattice ----------

// true iff both share a ground and every block of fine sits inside one block
// of coarse
bool is_coarsening(const SetPartition& coarse, const SetPartition& fine);

// prod over coarse blocks of (-1)^(k-1) (k-1)!, k = number of fine blocks
// merged into that block; domain_error if not comparable
BigInt mobius_factor(const SetPartition& coarse, const SetPartition& fine);

// ---------- occupation profiles ----------

OccupationProfile occupation_stats(const SetPartition& p);
// partitions of an E-set sharing the profile: E! / (prod_j (j!)^{n_j} n_j!)
BigInt rho_multiplicity(const OccupationProfile& profile);
// all profiles with element count E (and block count N when given)
std::vector<OccupationProfile> enumerate_profiles(int E, std::optional<int> N = std::nullopt);
// B_{n,m}(z) = sum of rho * prod z_j^{n_j} over profiles with E=n, N=m;
// z[0] holds z_1
Rational bell_polynomial(int n, int m, const std::vector<Rational>& z);

}  // namespace cf
