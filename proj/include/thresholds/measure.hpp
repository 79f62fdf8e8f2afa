#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thresholds/family.hpp"

namespace thresholds {

// One row of an analysis sweep at a fixed p.
struct AnalysisReport {
  double p = 0;
  double m = 0;            // measure of the family
  double m_prime = 0;      // derivative of the measure in p
  double influence = 0;    // total influence
  double iso_gap = 0;      // p * influence - m * log_p(m), NaN if degenerate
  double ratio = 0;        // p * m' / (m * log_p m), NaN if degenerate
};

struct Influence {
  double total = 0;
  std::vector<double> per_coordinate;
};

struct OptimalPResult {
  double p = 0;       // witness probability
  double c_used = 0;  // the constant the witness was checked against
  double ratio = 0;   // optimality ratio at the witness
  double bound = 0;   // c_used * log2(1/p) at the witness
};

// Measures below this distance from {0, 1} are treated as degenerate for
// logarithmic quantities.
constexpr double kDegenerateMeasureTol = 1e-12;

// Exact product-measure analysis of a monotone family via one pass over all
// 2^n subsets.  The pass records, per cardinality k, the number of members
// a_k and, per coordinate i, the number of members x of cardinality k with
// i in x and x \ {i} not a member.  Every per-p quantity is then an O(n)
// polynomial evaluation.
class ExactAnalyzer {
 public:
  explicit ExactAnalyzer(const MonotoneFamily& f, int cap = kDefaultEnumCap);

  const MonotoneFamily& family() const { return family_; }
  int n() const { return family_.n(); }

  // Probability that a p-biased random subset is a member.
  double mu(double p) const;

  // d/dp of mu; equals the total influence (Margulis–Russo).
  double mu_derivative(double p) const;

  Influence influence(double p) const;

  // The unique p with mu(p) = 1/2, by bisection to the given tolerance.
  double critical_probability(double tol = 1e-9) const;

  // p * I(p) - m(p) * log_p m(p); nonnegative for p in (0,1).
  double iso_gap(double p) const;

  // p * m'(p) / (m(p) * log_p m(p)); at least 1 for p in (0,1).
  double optimality_ratio(double p) const;

  AnalysisReport report(double p) const;

  const std::vector<std::uint64_t>& level_counts() const { return levels_; }

 private:
  void check_interior(double p) const;

  MonotoneFamily family_;
  std::vector<std::uint64_t> levels_;                // a_k, k = 0..n
  std::vector<std::vector<std::uint64_t>> boundary_; // [i][k]
};

// One-shot conveniences (each builds an ExactAnalyzer).
double mu(const MonotoneFamily& f, double p, int cap = kDefaultEnumCap);
double mu_derivative(const MonotoneFamily& f, double p,
                     int cap = kDefaultEnumCap);
Influence influence(const MonotoneFamily& f, double p,
                    int cap = kDefaultEnumCap);
double critical_probability(const MonotoneFamily& f, double tol = 1e-9,
                            int cap = kDefaultEnumCap);
double iso_gap(const MonotoneFamily& f, double p, int cap = kDefaultEnumCap);
double optimality_ratio(const MonotoneFamily& f, double p,
                        int cap = kDefaultEnumCap);

// Same sum as mu but in 50-digit floats, rounded back to double at the end.
// Cross-checks cancellation error in the double path.
double mu_highprec(const MonotoneFamily& f, double p,
                   int cap = kDefaultEnumCap);

// |mu'(p) - total influence(p)|; zero in exact arithmetic.
double russo_residual(const ExactAnalyzer& a, double p);

// Scans a geometric grid of 1000 points from p_c down to n^{-eps} * p_c and
// returns the first p where ratio(p) <= C * log2(1/p) with C = 2/(eps ln 2).
// Such a point always exists; failure to find one signals a bug
// (SweepFailedError).
OptimalPResult optimal_p_sweep(const ExactAnalyzer& a, double eps);

enum class ConditionMode {
  kContains,  // condition on R being a subset of the random set
  kAvoids,    // condition on R being disjoint from the random set
};

// Conditional measure given the status of every coordinate of R, computed by
// direct enumeration of the free coordinates.
double conditional_mu(const MonotoneFamily& f, double p, Mask r,
                      ConditionMode mode, int cap = kDefaultEnumCap);

struct DualityResiduals {
  double mu_residual = 0;         // |mu_{1-p}(dual) - (1 - mu_p(f))|
  double influence_residual = 0;  // |I_{1-p}(dual) - I_p(f)|
};

DualityResiduals duality_identities(const MonotoneFamily& f, double p,
                                    int dual_cap = kDefaultDualCap,
                                    int enum_cap = kDefaultEnumCap);

// Gap of the two-point entropy inequality:
//   (1-p) a log_p a + p b log_p b + p (b - a) >= M log_p M,
// with M = (1-p) a + p b, for 0 < a <= b <= 1.  Returns left minus right.
double iso_lemma_gap(double a, double b, double p);

constexpr const char* kSweepCsvHeader = "p,m,dm_dp,influence,iso_gap,optimality_ratio";

}  // namespace thresholds
