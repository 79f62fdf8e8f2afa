#include "thresholds/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace thresholds {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(what) + " must lie in [0, 1], got " +
                      std::to_string(p));
}

// powers[k] = x^k for k = 0..n
std::vector<double> power_table(double x, int n) {
  std::vector<double> t(n + 1);
  t[0] = 1.0;
  for (int k = 1; k <= n; ++k) t[k] = t[k - 1] * x;
  return t;
}

}  // namespace

ExactAnalyzer::ExactAnalyzer(const MonotoneFamily& f, int cap) : family_(f) {
  MembershipTable table(f, cap);
  int n = f.n();
  levels_.assign(n + 1, 0);
  boundary_.assign(n, std::vector<std::uint64_t>(n + 1, 0));
  Mask count = Mask{1} << n;
  for (Mask s = 0; s < count; ++s) {
    if (!table.test(s)) continue;
    int k = popcount(s);
    levels_[k]++;
    Mask rest = s;
    while (rest) {
      int i = std::countr_zero(rest);
      rest &= rest - 1;
      if (!table.test(s ^ bit(i))) boundary_[i][k]++;
    }
  }
}

double ExactAnalyzer::mu(double p) const {
  check_probability(p, "p");
  int n = family_.n();
  auto pk = power_table(p, n);
  auto qk = power_table(1.0 - p, n);
  double sum = 0;
  for (int k = 0; k <= n; ++k)
    if (levels_[k]) sum += double(levels_[k]) * pk[k] * qk[n - k];
  return std::clamp(sum, 0.0, 1.0);
}

double ExactAnalyzer::mu_derivative(double p) const {
  check_probability(p, "p");
  int n = family_.n();
  auto pk = power_table(p, n);
  auto qk = power_table(1.0 - p, n);
  double sum = 0;
  for (int k = 0; k <= n; ++k) {
    if (!levels_[k]) continue;
    double a = double(levels_[k]);
    if (k >= 1) sum += a * k * pk[k - 1] * qk[n - k];
    if (k <= n - 1) sum -= a * (n - k) * pk[k] * qk[n - k - 1];
  }
  return sum;
}

Influence ExactAnalyzer::influence(double p) const {
  check_probability(p, "p");
  int n = family_.n();
  auto pk = power_table(p, n);
  auto qk = power_table(1.0 - p, n);
  Influence inf;
  inf.per_coordinate.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    // Pivotal pairs (x, x \ {i}) with x a member of cardinality k contribute
    // p^{k-1} (1-p)^{n-k} each: the two weights mu_p(x) + mu_p(x \ i).
    for (int k = 1; k <= n; ++k)
      if (boundary_[i][k]) s += double(boundary_[i][k]) * pk[k - 1] * qk[n - k];
    inf.per_coordinate[i] = s;
    inf.total += s;
  }
  return inf;
}

double ExactAnalyzer::critical_probability(double tol) const {
  if (!(tol > 0))
    throw BadParameterError("tolerance must be positive");
  // mu is strictly increasing for a nontrivial family, with mu(0) = 0 and
  // mu(1) = 1, so the root of mu - 1/2 is unique.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mu(mid) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void ExactAnalyzer::check_interior(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("p must lie strictly inside (0, 1), got " +
                      std::to_string(p));
}

double ExactAnalyzer::iso_gap(double p) const {
  check_interior(p);
  double m = mu(p);
  if (m < kDegenerateMeasureTol || 1.0 - m < kDegenerateMeasureTol)
    throw DegenerateMeasureError("measure too close to {0,1} at p = " +
                                 std::to_string(p));
  double total = influence(p).total;
  double logp_m = std::log(m) / std::log(p);
  return p * total - m * logp_m;
}

double ExactAnalyzer::optimality_ratio(double p) const {
  check_interior(p);
  double m = mu(p);
  if (m < kDegenerateMeasureTol || 1.0 - m < kDegenerateMeasureTol)
    throw DegenerateMeasureError("measure too close to {0,1} at p = " +
                                 std::to_string(p));
  double logp_m = std::log(m) / std::log(p);
  return p * mu_derivative(p) / (m * logp_m);
}

AnalysisReport ExactAnalyzer::report(double p) const {
  check_probability(p, "p");
  AnalysisReport r;
  r.p = p;
  r.m = mu(p);
  r.m_prime = mu_derivative(p);
  r.influence = influence(p).total;
  bool interior = p > 0.0 && p < 1.0;
  bool degenerate = r.m < kDegenerateMeasureTol ||
                    1.0 - r.m < kDegenerateMeasureTol;
  if (interior && !degenerate) {
    double logp_m = std::log(r.m) / std::log(p);
    r.iso_gap = p * r.influence - r.m * logp_m;
    r.ratio = p * r.m_prime / (r.m * logp_m);
  } else {
    r.iso_gap = kNaN;
    r.ratio = kNaN;
  }
  return r;
}

double mu(const MonotoneFamily& f, double p, int cap) {
  return ExactAnalyzer(f, cap).mu(p);
}
double mu_derivative(const MonotoneFamily& f, double p, int cap) {
  return ExactAnalyzer(f, cap).mu_derivative(p);
}
Influence influence(const MonotoneFamily& f, double p, int cap) {
  return ExactAnalyzer(f, cap).influence(p);
}
double critical_probability(const MonotoneFamily& f, double tol, int cap) {
  return ExactAnalyzer(f, cap).critical_probability(tol);
}
double iso_gap(const MonotoneFamily& f, double p, int cap) {
  return ExactAnalyzer(f, cap).iso_gap(p);
}
double optimality_ratio(const MonotoneFamily& f, double p, int cap) {
  return ExactAnalyzer(f, cap).optimality_ratio(p);
}

double mu_highprec(const MonotoneFamily& f, double p, int cap) {
  check_probability(p, "p");
  using Real = boost::multiprecision::cpp_bin_float_50;
  MembershipTable table(f, cap);
  int n = f.n();
  std::vector<std::uint64_t> levels(n + 1, 0);
  Mask count = Mask{1} << n;
  for (Mask s = 0; s < count; ++s)
    if (table.test(s)) levels[popcount(s)]++;
  Real rp = p, rq = Real(1) - Real(p);
  std::vector<Real> pk(n + 1), qk(n + 1);
  pk[0] = qk[0] = 1;
  for (int k = 1; k <= n; ++k) {
    pk[k] = pk[k - 1] * rp;
    qk[k] = qk[k - 1] * rq;
  }
  Real sum = 0;
  for (int k = 0; k <= n; ++k)
    if (levels[k]) sum += Real(levels[k]) * pk[k] * qk[n - k];
  return sum.convert_to<double>();
}

double russo_residual(const ExactAnalyzer& a, double p) {
  return std::fabs(a.mu_derivative(p) - a.influence(p).total);
}

OptimalPResult optimal_p_sweep(const ExactAnalyzer& a, double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw BadParameterError("eps must lie in (0, 1], got " +
                            std::to_string(eps));
  const int kGridPoints = 1000;
  double pc = a.critical_probability(1e-12);
  double n = a.n();
  double c = 2.0 / (eps * std::numbers::ln2);
  double lo = std::pow(n, -eps) * pc;
  for (int j = 0; j < kGridPoints; ++j) {
    double t = kGridPoints == 1 ? 0.0 : double(j) / (kGridPoints - 1);
    double p = pc * std::pow(lo / pc, t);
    double ratio;
    try {
      ratio = a.optimality_ratio(p);
    } catch (const DegenerateMeasureError&) {
      continue;
    }
    double bound = c * std::log2(1.0 / p);
    if (ratio <= bound) return {p, c, ratio, bound};
  }
  throw SweepFailedError("no witness on the sweep grid; this is a bug");
}

double conditional_mu(const MonotoneFamily& f, double p, Mask r,
                      ConditionMode mode, int cap) {
  check_probability(p, "p");
  if (r & ~full_mask(f.n()))
    throw ValidationError("conditioning set " + mask_to_string(r) +
                          " has elements outside the ground set");
  MembershipTable table(f, cap);
  Mask free = full_mask(f.n()) & ~r;
  int nf = popcount(free);
  auto pk = power_table(p, nf);
  auto qk = power_table(1.0 - p, nf);
  double sum = 0;
  // Iterate over all subsets t of the free coordinates.
  Mask t = free;
  for (;;) {
    Mask s = mode == ConditionMode::kContains ? (r | t) : t;
    if (table.test(s)) {
      int k = popcount(t);
      sum += pk[k] * qk[nf - k];
    }
    if (t == 0) break;
    t = (t - 1) & free;
  }
  return std::clamp(sum, 0.0, 1.0);
}

DualityResiduals duality_identities(const MonotoneFamily& f, double p,
                                    int dual_cap, int enum_cap) {
  check_probability(p, "p");
  MonotoneFamily fd = dual(f, dual_cap);
  ExactAnalyzer a(f, enum_cap), b(fd, enum_cap);
  DualityResiduals r;
  r.mu_residual = std::fabs(b.mu(1.0 - p) - (1.0 - a.mu(p)));
  r.influence_residual =
      std::fabs(b.influence(1.0 - p).total - a.influence(p).total);
  return r;
}

double iso_lemma_gap(double a, double b, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("p must lie strictly inside (0, 1)");
  if (!(a > 0.0 && a <= b && b <= 1.0))
    throw DomainError("need 0 < a <= b <= 1");
  double lp = std::log(p);
  auto logp = [lp](double x) { return std::log(x) / lp; };
  double m = (1.0 - p) * a + p * b;
  return (1.0 - p) * a * logp(a) + p * b * logp(b) + p * (b - a) -
         m * logp(m);
}

}  // namespace thresholds
