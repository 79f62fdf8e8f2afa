#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "thresholds/errors.hpp"

namespace thresholds {

// A subset of the ground set {0, ..., n-1}, n <= 64, as a bitmask.
using Mask = std::uint64_t;

constexpr int kMaxGroundSet = 64;

// Default / hard caps for operations that enumerate all 2^n subsets.
constexpr int kDefaultEnumCap = 24;
constexpr int kHardEnumCap = 30;

// Default cap for dualization (minimal transversal enumeration).
constexpr int kDefaultDualCap = 20;

inline Mask bit(int i) { return Mask{1} << i; }

inline Mask full_mask(int n) {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

inline int popcount(Mask m) { return std::popcount(m); }

std::vector<int> mask_to_elements(Mask m);
Mask elements_to_mask(const std::vector<int>& elems, int n);
std::string mask_to_string(Mask m);

// Canonical order on sets: by cardinality, ties broken by numeric value.
inline bool canonical_less(Mask a, Mask b) {
  int pa = popcount(a), pb = popcount(b);
  if (pa != pb) return pa < pb;
  return a < b;
}

// A finite collection of subsets of {0..n-1}, kept sorted in canonical order
// with no duplicates.  Not necessarily an antichain.
struct SetFamily {
  int n = 0;
  std::vector<Mask> sets;

  static SetFamily from_masks(int n, std::vector<Mask> sets);

  bool operator==(const SetFamily&) const = default;
  std::size_t size() const { return sets.size(); }
};

// A nontrivial monotone (upward-closed) family, represented by its antichain
// of minimal sets.  Construction rejects the trivial families (empty family
// and the full power set).
class MonotoneFamily {
 public:
  // Canonicalizes: deduplicates, drops dominated sets (recording them in
  // *removed if given), sorts canonically.  Throws TrivialFamilyError if the
  // input is empty or contains the empty set, ValidationError on out-of-range
  // elements.
  static MonotoneFamily from_sets(int n, const std::vector<Mask>& sets,
                                  std::vector<Mask>* removed = nullptr);

  int n() const { return n_; }
  const std::vector<Mask>& minimal_sets() const { return minimal_; }

  // Membership test: true iff s contains some minimal set.
  bool contains(Mask s) const;

  bool operator==(const MonotoneFamily& o) const {
    return n_ == o.n_ && minimal_ == o.minimal_;
  }

 private:
  MonotoneFamily(int n, std::vector<Mask> minimal)
      : n_(n), minimal_(std::move(minimal)) {}

  int n_ = 0;
  std::vector<Mask> minimal_;
};

// Smallest monotone family containing every set of g.
MonotoneFamily upset_of(const SetFamily& g);

// True iff every member of f's antichain contains some set of g, i.e. the
// upward closure of g covers f.  Requires matching ground sets.
bool covers(const MonotoneFamily& f, const SetFamily& g);

// The dual family: complements of non-members.  Its minimal sets are exactly
// the minimal transversals of f's minimal sets.
MonotoneFamily dual(const MonotoneFamily& f, int cap = kDefaultDualCap);

// All minimal transversals (minimal hitting sets) of the given collection.
std::vector<Mask> minimal_transversals(const std::vector<Mask>& sets, int n);

// Bit-packed membership indicator over all 2^n subsets, built by a
// word-parallel upward closure from the minimal sets.
class MembershipTable {
 public:
  explicit MembershipTable(const MonotoneFamily& f, int cap = kDefaultEnumCap);

  int n() const { return n_; }
  bool test(Mask s) const {
    return (words_[s >> 6] >> (s & 63)) & 1;
  }
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

// Number of members of each cardinality: counts[k] = #{S in F : |S| = k}.
struct LevelProfile {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
};

LevelProfile level_profile(const MonotoneFamily& f, int cap = kDefaultEnumCap);

}  // namespace thresholds
