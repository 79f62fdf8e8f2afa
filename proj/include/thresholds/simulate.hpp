#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "thresholds/graphs.hpp"
#include "thresholds/rng.hpp"

namespace thresholds {

// A k-uniform hypergraph on vertices 0..n-1; edges are sorted k-sets, kept
// sorted lexicographically without duplicates.
struct HypergraphSpec {
  int n = 0;
  int k = 0;
  std::vector<std::vector<int>> edges;

  static HypergraphSpec make(int n, int k,
                             std::vector<std::vector<int>> edges);
};

GraphSpec sample_gnp(int n, double p, Rng& rng);
HypergraphSpec sample_hypergraph(int n, int k, double p, Rng& rng);

// Exact property checkers (used to score Monte Carlo samples).
bool has_subgraph(const GraphSpec& g, const GraphSpec& pattern);
bool has_hamilton_cycle(const GraphSpec& g);       // v <= 20, subset DP
bool has_triangle_factor(const GraphSpec& g);      // v <= 21, 3 | v
bool has_perfect_matching(const HypergraphSpec& hg);  // n <= 24, k | n

// Which monotone graph/hypergraph property to sample.
struct PropertySpec {
  enum class Kind { kSubgraph, kHamilton, kTriangleFactor, kHyperMatching };

  Kind kind = Kind::kSubgraph;
  int n = 0;          // host size
  int k = 0;          // hypergraph uniformity (kHyperMatching only)
  GraphSpec pattern;  // kSubgraph only

  static PropertySpec subgraph(int n, GraphSpec pattern);
  static PropertySpec hamilton(int n);
  static PropertySpec triangle_factor(int n);
  static PropertySpec hyper_matching(int n, int k);

  void validate() const;
};

struct MCEstimate {
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0;
  double ci_low = 0;   // Wilson interval at the stated z
  double ci_high = 0;
  double z = 0;
};

// Wilson score interval for successes/trials at normal quantile z.
std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double z);

// Inverse standard normal CDF (Acklam's rational approximation with one
// Halley refinement step; relative error far below any use here).
double normal_quantile(double p);

constexpr double kZ95 = 1.959963984540054;

// Monte Carlo estimate of the measure of the property at edge probability p.
// Trial t draws its own generator from stream_seed(seed, t), so results are
// reproducible and independent of batching.
MCEstimate estimate_mu(const PropertySpec& prop, double p,
                       std::uint64_t trials, std::uint64_t seed);

// Low-level variant for arbitrary predicates.
MCEstimate estimate_mu_fn(const std::function<bool(Rng&)>& trial, double p,
                          std::uint64_t trials, std::uint64_t seed);

struct ProbeRecord {
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double ci_low = 0;
  double ci_high = 0;
  int verdict = 0;  // +1: measure > 1/2, -1: measure < 1/2, 0: ambiguous
};

struct EmpiricalPc {
  double p_hat = 0;
  double lo = 0;
  double hi = 0;
  bool conclusive = false;
  std::vector<ProbeRecord> probes;
};

// Bisection for the p where the property's measure crosses 1/2, each probe
// decided by a batched sequential Wilson test with a per-look Bonferroni
// correction so the whole run keeps the stated confidence.  If a probe stays
// ambiguous at its trial cap, the bracket so far is returned with
// conclusive = false; endpoints only ever move on confident verdicts.
EmpiricalPc empirical_critical_p(const PropertySpec& prop, double tol,
                                 double confidence, std::uint64_t seed,
                                 std::uint64_t max_trials_per_probe = 100000);

}  // namespace thresholds
