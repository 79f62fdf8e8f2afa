#include "thresholds/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thresholds {

HypergraphSpec HypergraphSpec::make(int n, int k,
                                    std::vector<std::vector<int>> edges) {
  if (n < 1 || n > 64)
    throw ValidationError("hypergraph vertex count must be in [1, 64]");
  if (k < 1 || k > n)
    throw ValidationError("edge size k must be in [1, n]");
  for (auto& e : edges) {
    if (int(e.size()) != k)
      throw ValidationError("every edge must have exactly " +
                            std::to_string(k) + " vertices");
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 0 || e[i] >= n)
        throw ValidationError("edge vertex " + std::to_string(e[i]) +
                              " out of range");
      if (i > 0 && e[i] == e[i - 1])
        throw ValidationError("repeated vertex in edge");
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return HypergraphSpec{n, k, std::move(edges)};
}

GraphSpec sample_gnp(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return GraphSpec{n, std::move(edges)};
}

HypergraphSpec sample_hypergraph(int n, int k, double p, Rng& rng) {
  std::vector<std::vector<int>> edges;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  // Lexicographic walk over all k-subsets of 0..n-1.
  for (;;) {
    if (rng.bernoulli(p)) edges.push_back(comb);
    int i = k - 1;
    while (i >= 0 && comb[i] == n - k + i) --i;
    if (i < 0) break;
    comb[i]++;
    for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return HypergraphSpec{n, k, std::move(edges)};
}

bool has_subgraph(const GraphSpec& g, const GraphSpec& pattern) {
  if (pattern.edges.empty()) return true;
  if (pattern.v > 64 || g.v > 64)
    throw TooLargeError("subgraph check supports at most 64 vertices");
  auto gadj = g.adjacency();
  auto padj = pattern.adjacency();
  auto gdeg = g.degrees();
  auto pdeg = pattern.degrees();

  std::vector<int> core;
  for (int u = 0; u < pattern.v; ++u)
    if (pdeg[u] > 0) core.push_back(u);
  if (int(core.size()) > g.v) return false;
  if (g.v < pattern.v) return false;
  // Higher-degree pattern vertices first: fail fast.
  std::sort(core.begin(), core.end(),
            [&](int a, int b) { return pdeg[a] > pdeg[b]; });

  std::vector<int> img(pattern.v, -1);
  Mask used = 0;
  std::function<bool(std::size_t)> extend = [&](std::size_t d) -> bool {
    if (d == core.size()) return true;
    int u = core[d];
    for (int w = 0; w < g.v; ++w) {
      if (used & bit(w)) continue;
      if (gdeg[w] < pdeg[u]) continue;
      bool ok = true;
      for (std::size_t e = 0; e < d && ok; ++e) {
        int ue = core[e];
        if ((padj[u] >> ue) & 1)
          if (!((gadj[w] >> img[ue]) & 1)) ok = false;
      }
      if (!ok) continue;
      img[u] = w;
      used |= bit(w);
      if (extend(d + 1)) return true;
      used &= ~bit(w);
    }
    return false;
  };
  return extend(0);
}

bool has_hamilton_cycle(const GraphSpec& g) {
  if (g.v > 20)
    throw TooLargeError("Hamilton-cycle DP capped at 20 vertices, got " +
                        std::to_string(g.v));
  if (g.v < 3) return false;
  auto adj = g.adjacency();
  std::size_t states = std::size_t{1} << g.v;
  // dp[mask] = set of possible path endpoints, paths starting at vertex 0
  // and visiting exactly mask (which always contains 0).
  std::vector<std::uint32_t> dp(states, 0);
  dp[1] = 1;
  for (std::size_t mask = 1; mask < states; mask += 2) {
    std::uint32_t ends = dp[mask];
    while (ends) {
      int u = std::countr_zero(ends);
      ends &= ends - 1;
      Mask nxt = adj[u] & ~Mask(mask);
      while (nxt) {
        int w = std::countr_zero(nxt);
        nxt &= nxt - 1;
        dp[mask | (std::size_t{1} << w)] |= std::uint32_t{1} << w;
      }
    }
  }
  std::uint32_t final_ends = dp[states - 1];
  return (final_ends & std::uint32_t(adj[0])) != 0;
}

bool has_triangle_factor(const GraphSpec& g) {
  if (g.v % 3 != 0)
    throw NotDivisibleError("triangle factor needs 3 | v, got v = " +
                            std::to_string(g.v));
  if (g.v > 21)
    throw TooLargeError("triangle-factor DP capped at 21 vertices");
  auto adj = g.adjacency();
  Mask all = full_mask(g.v);
  std::vector<std::uint8_t> state(std::size_t{1} << g.v, 0);  // 1 = dead end
  std::function<bool(Mask)> solve = [&](Mask covered) -> bool {
    if (covered == all) return true;
    if (state[covered]) return false;
    int u = std::countr_zero(~covered);
    Mask rest = adj[u] & ~covered;
    for (Mask ta = rest; ta;) {
      int a = std::countr_zero(ta);
      ta &= ta - 1;
      Mask tb = rest & adj[a];
      tb &= ~(bit(a) | (bit(a) - 1));  // b > a
      while (tb) {
        int b = std::countr_zero(tb);
        tb &= tb - 1;
        if (solve(covered | bit(u) | bit(a) | bit(b))) return true;
      }
    }
    state[covered] = 1;
    return false;
  };
  return solve(0);
}

bool has_perfect_matching(const HypergraphSpec& hg) {
  if (hg.n % hg.k != 0)
    throw NotDivisibleError("perfect matching needs k | n, got n = " +
                            std::to_string(hg.n) + ", k = " +
                            std::to_string(hg.k));
  if (hg.n > 24)
    throw TooLargeError("hypergraph matching DP capped at 24 vertices");
  std::vector<Mask> edge_masks;
  edge_masks.reserve(hg.edges.size());
  for (const auto& e : hg.edges) {
    Mask m = 0;
    for (int u : e) m |= bit(u);
    edge_masks.push_back(m);
  }
  // Edges grouped by vertex, for the lowest-uncovered pivot.
  std::vector<std::vector<Mask>> by_vertex(hg.n);
  for (Mask m : edge_masks) {
    Mask t = m;
    while (t) {
      by_vertex[std::countr_zero(t)].push_back(m);
      t &= t - 1;
    }
  }
  Mask all = full_mask(hg.n);
  std::vector<std::uint8_t> dead(std::size_t{1} << hg.n, 0);
  std::function<bool(Mask)> solve = [&](Mask covered) -> bool {
    if (covered == all) return true;
    if (dead[covered]) return false;
    int u = std::countr_zero(~covered);
    for (Mask m : by_vertex[u])
      if ((m & covered) == 0 && solve(covered | m)) return true;
    dead[covered] = 1;
    return false;
  };
  return solve(0);
}

PropertySpec PropertySpec::subgraph(int n, GraphSpec pattern) {
  PropertySpec p;
  p.kind = Kind::kSubgraph;
  p.n = n;
  p.pattern = std::move(pattern);
  p.validate();
  return p;
}
PropertySpec PropertySpec::hamilton(int n) {
  PropertySpec p;
  p.kind = Kind::kHamilton;
  p.n = n;
  p.validate();
  return p;
}
PropertySpec PropertySpec::triangle_factor(int n) {
  PropertySpec p;
  p.kind = Kind::kTriangleFactor;
  p.n = n;
  p.validate();
  return p;
}
PropertySpec PropertySpec::hyper_matching(int n, int k) {
  PropertySpec p;
  p.kind = Kind::kHyperMatching;
  p.n = n;
  p.k = k;
  p.validate();
  return p;
}

void PropertySpec::validate() const {
  switch (kind) {
    case Kind::kSubgraph:
      if (n < 1 || n > 64) throw BadParameterError("host size must be in [1, 64]");
      if (pattern.v > n)
        throw BadParameterError("pattern larger than the host");
      if (pattern.edges.empty())
        throw BadParameterError("pattern needs at least one edge");
      break;
    case Kind::kHamilton:
      if (n < 1 || n > 20)
        throw BadParameterError("Hamilton sampling supports n <= 20");
      break;
    case Kind::kTriangleFactor:
      if (n < 3 || n > 21 || n % 3 != 0)
        throw BadParameterError("triangle factor needs 3 | n, n <= 21");
      break;
    case Kind::kHyperMatching:
      if (n < 1 || n > 24) throw BadParameterError("matching supports n <= 24");
      if (k < 1 || k > n) throw BadParameterError("need 1 <= k <= n");
      if (n % k != 0) throw BadParameterError("matching needs k | n");
      break;
  }
}

std::pair<double, double> wilson_interval(std::uint64_t successes,
                                          std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  double nd = double(trials);
  double phat = double(successes) / nd;
  double z2 = z * z;
  double denom = 1.0 + z2 / nd;
  double center = (phat + z2 / (2 * nd)) / denom;
  double half = z / denom *
                std::sqrt(phat * (1 - phat) / nd + z2 / (4 * nd * nd));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("normal quantile needs p strictly inside (0, 1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // One Halley step against erfc for full double accuracy.
  double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  x = x - u / (1 + x * u / 2);
  return x;
}

namespace {

bool run_trial(const PropertySpec& prop, double p, Rng& rng) {
  switch (prop.kind) {
    case PropertySpec::Kind::kSubgraph: {
      GraphSpec g = sample_gnp(prop.n, p, rng);
      return has_subgraph(g, prop.pattern);
    }
    case PropertySpec::Kind::kHamilton: {
      GraphSpec g = sample_gnp(prop.n, p, rng);
      return has_hamilton_cycle(g);
    }
    case PropertySpec::Kind::kTriangleFactor: {
      GraphSpec g = sample_gnp(prop.n, p, rng);
      return has_triangle_factor(g);
    }
    case PropertySpec::Kind::kHyperMatching: {
      HypergraphSpec hg = sample_hypergraph(prop.n, prop.k, p, rng);
      return has_perfect_matching(hg);
    }
  }
  return false;
}

}  // namespace

MCEstimate estimate_mu_fn(const std::function<bool(Rng&)>& trial, double p,
                          std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw BadParameterError("need at least one trial");
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(stream_seed(seed, t));
    if (trial(rng)) ++successes;
  }
  MCEstimate est;
  est.p = p;
  est.trials = trials;
  est.successes = successes;
  est.estimate = double(successes) / double(trials);
  est.z = kZ95;
  auto [lo, hi] = wilson_interval(successes, trials, est.z);
  est.ci_low = lo;
  est.ci_high = hi;
  return est;
}

MCEstimate estimate_mu(const PropertySpec& prop, double p,
                       std::uint64_t trials, std::uint64_t seed) {
  prop.validate();
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError("p must lie in [0, 1]");
  return estimate_mu_fn([&](Rng& rng) { return run_trial(prop, p, rng); }, p,
                        trials, seed);
}

EmpiricalPc empirical_critical_p(const PropertySpec& prop, double tol,
                                 double confidence, std::uint64_t seed,
                                 std::uint64_t max_trials_per_probe) {
  prop.validate();
  if (!(tol > 0 && tol < 1)) throw BadParameterError("tol must be in (0, 1)");
  if (!(confidence > 0.5 && confidence < 1))
    throw BadParameterError("confidence must be in (0.5, 1)");
  const std::uint64_t kBatch = 250;
  if (max_trials_per_probe < kBatch)
    throw BadParameterError("need at least " + std::to_string(kBatch) +
                            " trials per probe");

  // Worst-case number of interim looks across the whole run, for the
  // Bonferroni split of the error budget.
  std::uint64_t looks_per_probe =
      (max_trials_per_probe + kBatch - 1) / kBatch;
  int max_probes = 64;
  double alpha = 1.0 - confidence;
  double alpha_per_look =
      alpha / (double(looks_per_probe) * double(max_probes));
  double z_look = normal_quantile(1.0 - alpha_per_look / 2.0);

  EmpiricalPc out;
  out.lo = 0.0;
  out.hi = 1.0;
  out.conclusive = true;

  int probe_index = 0;
  while (out.hi - out.lo > tol && probe_index < max_probes) {
    double p = 0.5 * (out.lo + out.hi);
    std::uint64_t probe_seed = stream_seed(seed, 0x700000 + probe_index);
    std::uint64_t done = 0, successes = 0;
    int verdict = 0;
    double lo_ci = 0, hi_ci = 1;
    while (done < max_trials_per_probe) {
      std::uint64_t batch = std::min(kBatch, max_trials_per_probe - done);
      for (std::uint64_t t = 0; t < batch; ++t) {
        Rng rng(stream_seed(probe_seed, done + t));
        if (run_trial(prop, p, rng)) ++successes;
      }
      done += batch;
      auto [wl, wh] = wilson_interval(successes, done, z_look);
      lo_ci = wl;
      hi_ci = wh;
      if (wl > 0.5) {
        verdict = +1;
        break;
      }
      if (wh < 0.5) {
        verdict = -1;
        break;
      }
    }
    out.probes.push_back(
        ProbeRecord{p, done, successes, lo_ci, hi_ci, verdict});
    if (verdict == +1) {
      out.hi = p;
    } else if (verdict == -1) {
      out.lo = p;
    } else {
      // No confident call at the cap: stop refining rather than move an
      // endpoint on noise.
      out.conclusive = false;
      break;
    }
    ++probe_index;
  }
  out.p_hat = 0.5 * (out.lo + out.hi);
  if (out.hi - out.lo > tol) out.conclusive = false;
  return out;
}

}  // namespace thresholds
