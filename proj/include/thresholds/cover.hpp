#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "thresholds/family.hpp"

namespace thresholds {

constexpr int kDefaultCoverCap = 16;    // minimal sets for the mask DP
constexpr int kMaskDpHardCap = 22;      // hard limit on the 2^m DP
constexpr int kTwoLevelSlotCap = 22;    // shared elements in the 2-level solver
constexpr int kBranchBoundSetCap = 256;          // minimal sets, search engine
constexpr int kBranchBoundSubsetBits = 18;       // largest minimal set there
constexpr std::uint64_t kBranchBoundEnumBudget = std::uint64_t{1} << 18;
constexpr std::uint64_t kBranchBoundNodeCap = std::uint64_t{1} << 22;
// Slack for bound comparisons in the search engine: branches within this of
// the incumbent are treated as ties, so the reported minimum is exact to it.
constexpr double kBranchBoundSlack = 1e-12;
constexpr int kDefaultAutomorphismCap = 8;

// A weighted cover of a family: a collection G whose upward closure contains
// the family, together with its cost sum_{A in G} q^{|A|} at the q it was
// computed for.
struct CoverWitness {
  double q = 0;
  double cost = 0;
  SetFamily generator;
};

// Closure of the minimal sets under pairwise-and-deeper intersection.  Every
// minimum-cost cover can be rewritten to use only these sets, so restricting
// the search to them is lossless.
SetFamily candidate_sets(const MonotoneFamily& f,
                         int cover_cap = kDefaultCoverCap);

// Exact minimum-cost cover machinery, built once per family and evaluated at
// many q.  Three engines, picked automatically:
//   - a DP over the 2^m lattice of covered minimal-set subsets (m <= cap);
//   - for larger m, when every pairwise intersection of minimal sets has at
//     most one element, an exact two-level search over subsets of the shared
//     elements (cover each remaining minimal set by itself);
//   - otherwise a branch-and-bound over the closed candidates (each is a
//     subset of some minimal set, so the pool stays small even when 2^m
//     subfamily enumeration is out of reach), exact to kBranchBoundSlack,
//     with a node budget.
class CoverProblem {
 public:
  explicit CoverProblem(const MonotoneFamily& f,
                        int cover_cap = kDefaultCoverCap);
  ~CoverProblem();
  CoverProblem(CoverProblem&&) noexcept;

  const MonotoneFamily& family() const;

  double min_cost(double q) const;
  CoverWitness min_cost_witness(double q) const;

  // Cheap lower bound on min_cost(q): exact for the DP engines, the dual
  // charge bound for the search engine.  Threshold bisections use it to
  // reject a q without paying for a full search.
  double cost_lower_bound(double q) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CoverWitness min_cover_cost(const MonotoneFamily& f, double q,
                            int cover_cap = kDefaultCoverCap);

struct QThreshold {
  double q = 0;
  CoverWitness witness;  // witness at the returned q
};

// Largest q (to within tol, from below) such that some cover has cost < 1/2.
QThreshold q_threshold(const MonotoneFamily& f, double tol = 1e-9,
                       int cover_cap = kDefaultCoverCap);

// The group of ground-set permutations mapping the family onto itself.
struct AutomorphismGroup {
  int n = 0;
  std::vector<std::vector<std::uint8_t>> elements;  // each a permutation of 0..n-1

  Mask apply(const std::vector<std::uint8_t>& perm, Mask s) const;
  // Partition of the given sets into group orbits; returns per-set orbit ids
  // numbered by first occurrence.  Every image must itself be in the family.
  std::vector<int> orbit_ids(const SetFamily& sets) const;
};

AutomorphismGroup automorphisms(const MonotoneFamily& f,
                                int cap = kDefaultAutomorphismCap);

// Closure of the given permutations under composition.  Each generator must
// be a bijection of 0..n-1.
AutomorphismGroup close_generators(int n,
                                   const std::vector<std::vector<std::uint8_t>>& gens);

// Like q_threshold but with covers restricted to unions of whole orbits of
// the automorphism group, so the witness is invariant under the group.
// Always at most q_threshold's value.  If group is null the full group is
// computed (subject to the automorphism cap).
QThreshold q_star(const MonotoneFamily& f, double tol = 1e-9,
                  int cover_cap = kDefaultCoverCap,
                  const AutomorphismGroup* group = nullptr);

}  // namespace thresholds
