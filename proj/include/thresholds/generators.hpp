#pragma once

#include <cstdint>
#include <vector>

#include "thresholds/family.hpp"

namespace thresholds {

// Tribes-style parameters: n coordinates split into n/k blocks of size k.
struct TribesParams {
  int n = 0;
  int k = 0;

  TribesParams(int n, int k);
  int blocks() const { return n / k; }
};

// The family generated by the single minimal set r.
MonotoneFamily subcube(int n, Mask r);

// Minimal sets: one coordinate from each block (k^(n/k) transversals).  This
// is the dual of the "some block fully present" family; its measure is
// (1 - (1-p)^k)^(n/k).
MonotoneFamily dual_tribes(const TribesParams& params);

struct TribesValues {
  double m = 0;        // measure at p
  double m_prime = 0;  // d/dp
  double p_c = 0;      // measure = 1/2
};

// Closed forms for the dual-tribes family; block count may be fractional
// (these are formula evaluations, independent of constructibility).
double dual_tribes_mu(double n, double k, double p);
double dual_tribes_mu_derivative(double n, double k, double p);
double dual_tribes_critical_p(double n, double k);
// Cancellation-free form of p * m' / (m * log_p m) for the same family.
double dual_tribes_optimality_ratio(double n, double k, double p);

TribesValues tribes_closed_forms(const TribesParams& params, double p);
double tribes_optimality_ratio(const TribesParams& params, double p);

// The majority family on an odd ground set: all sets of size > n/2.
MonotoneFamily majority(int n);

struct RandomFamilyOptions {
  double size_bias = 0.4;  // per-coordinate inclusion rate for drawn sets
  int retry_cap = 100;
};

// target_count random nonempty sets, canonicalized.  Dominated draws can
// shrink the antichain below target_count; the family is whatever survives.
MonotoneFamily random_monotone(int n, int target_count, std::uint64_t seed,
                               const RandomFamilyOptions& opts = {});

// Ground set = all k-subsets of an n-vertex set (C(n,k) <= 64 slots);
// minimal sets = the perfect matchings of the complete k-uniform hypergraph.
MonotoneFamily hypergraph_matching_family(int n, int k);

struct TribesRegimeRow {
  double p = 0;
  double ratio = 0;        // optimality ratio at p, closed form
  double log2_inv_p = 0;   // log2(1/p)
  double normalized = 0;   // ratio / log2(1/p)
};

struct TribesRegimeReport {
  int n = 0;
  int k = 0;     // round(log2 n - log2 log2 n), at least 1
  double p_c = 0;
  std::vector<TribesRegimeRow> rows;
};

// Closed-form scan of the dual-tribes family in the regime where the
// optimality ratio grows like log(1/p): k chosen from n, one row per
// p = (log2 n)^(-j), j = 1..4.
TribesRegimeReport tribes_regime_report(int n);

}  // namespace thresholds
