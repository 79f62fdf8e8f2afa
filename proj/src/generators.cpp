#include "thresholds/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "thresholds/rng.hpp"

namespace thresholds {

namespace {

constexpr std::size_t kGeneratorSetCap = 100000;

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * std::uint64_t(n - i) / std::uint64_t(i + 1);
  return r;
}

}  // namespace

TribesParams::TribesParams(int n, int k) : n(n), k(k) {
  if (n < 1 || n > kMaxGroundSet)
    throw BadParameterError("n must be in [1, 64], got " + std::to_string(n));
  if (k < 1 || k > n)
    throw BadParameterError("block size k must be in [1, n]");
  if (n % k != 0)
    throw BadParameterError("block size " + std::to_string(k) +
                            " must divide n = " + std::to_string(n));
}

MonotoneFamily subcube(int n, Mask r) {
  return MonotoneFamily::from_sets(n, {r});
}

MonotoneFamily dual_tribes(const TribesParams& params) {
  int blocks = params.blocks();
  double count = std::pow(double(params.k), double(blocks));
  if (count > double(kGeneratorSetCap))
    throw TooManyMinimalSetsError(
        "dual tribes would have k^(n/k) = " + std::to_string(count) +
        " minimal sets; construction capped at " +
        std::to_string(kGeneratorSetCap));
  std::vector<Mask> sets;
  sets.reserve(std::size_t(count));
  std::vector<int> pick(blocks, 0);  // odometer: chosen offset per block
  for (;;) {
    Mask m = 0;
    for (int b = 0; b < blocks; ++b) m |= bit(b * params.k + pick[b]);
    sets.push_back(m);
    int b = blocks - 1;
    while (b >= 0 && pick[b] == params.k - 1) pick[b--] = 0;
    if (b < 0) break;
    pick[b]++;
  }
  return MonotoneFamily::from_sets(params.n, sets);
}

double dual_tribes_mu(double n, double k, double p) {
  return std::pow(1.0 - std::pow(1.0 - p, k), n / k);
}

double dual_tribes_mu_derivative(double n, double k, double p) {
  double q = 1.0 - p;
  double inner = 1.0 - std::pow(q, k);
  return n * std::pow(inner, n / k - 1.0) * std::pow(q, k - 1.0);
}

double dual_tribes_critical_p(double n, double k) {
  // (1 - (1-p)^k)^(n/k) = 1/2  =>  p = 1 - (1 - 2^(-k/n))^(1/k)
  return 1.0 - std::pow(1.0 - std::pow(2.0, -k / n), 1.0 / k);
}

double dual_tribes_optimality_ratio(double /*n*/, double k, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("optimality ratio needs p strictly inside (0, 1)");
  // p m' / (m log_p m) with m = inner^(n/k):
  //   log m = (n/k) log(inner), m'/m = n q^(k-1) / inner,
  // so the n factors cancel and no tiny powers are formed:
  //   R = p k q^(k-1) log p / (inner * log inner).
  double q = 1.0 - p;
  double inner = 1.0 - std::pow(q, k);
  return p * k * std::pow(q, k - 1.0) * std::log(p) /
         (inner * std::log(inner));
}

TribesValues tribes_closed_forms(const TribesParams& params, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("closed forms need p strictly inside (0, 1)");
  TribesValues v;
  v.m = dual_tribes_mu(params.n, params.k, p);
  v.m_prime = dual_tribes_mu_derivative(params.n, params.k, p);
  v.p_c = dual_tribes_critical_p(params.n, params.k);
  return v;
}

double tribes_optimality_ratio(const TribesParams& params, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("optimality ratio needs p strictly inside (0, 1)");
  return dual_tribes_optimality_ratio(params.n, params.k, p);
}

MonotoneFamily majority(int n) {
  if (n < 1 || n % 2 == 0)
    throw BadParameterError("majority needs an odd ground set, got n = " +
                            std::to_string(n));
  if (n > 25)
    throw BadParameterError("majority construction capped at n = 25");
  int k = (n + 1) / 2;
  if (binomial(n, k) > kGeneratorSetCap)
    throw TooManyMinimalSetsError("majority would have C(n, (n+1)/2) > " +
                                  std::to_string(kGeneratorSetCap) +
                                  " minimal sets");
  std::vector<Mask> sets;
  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  for (;;) {
    Mask m = 0;
    for (int c : comb) m |= bit(c);
    sets.push_back(m);
    int i = k - 1;
    while (i >= 0 && comb[i] == n - k + i) --i;
    if (i < 0) break;
    comb[i]++;
    for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
  return MonotoneFamily::from_sets(n, sets);
}

MonotoneFamily random_monotone(int n, int target_count, std::uint64_t seed,
                               const RandomFamilyOptions& opts) {
  if (n < 1 || n > kMaxGroundSet)
    throw BadParameterError("n must be in [1, 64]");
  if (target_count < 1)
    throw BadParameterError("need a positive number of sets");
  if (!(opts.size_bias > 0.0 && opts.size_bias < 1.0))
    throw BadParameterError("size bias must be in (0, 1)");
  Rng rng(seed);
  for (int attempt = 0; attempt < opts.retry_cap; ++attempt) {
    std::vector<Mask> sets;
    bool gave_up = false;
    for (int i = 0; i < target_count && !gave_up; ++i) {
      Mask m = 0;
      int resamples = 0;
      do {
        m = 0;
        for (int e = 0; e < n; ++e)
          if (rng.bernoulli(opts.size_bias)) m |= bit(e);
        if (++resamples > 1000) {
          gave_up = true;
          break;
        }
      } while (m == 0);
      if (!gave_up) sets.push_back(m);
    }
    if (gave_up) continue;
    return MonotoneFamily::from_sets(n, sets);
  }
  throw GenerationFailedError("random family generation exhausted " +
                              std::to_string(opts.retry_cap) + " attempts");
}

MonotoneFamily hypergraph_matching_family(int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw BadParameterError("need 1 <= k <= n");
  if (n % k != 0)
    throw NotDivisibleError("perfect matchings need k | n");
  std::uint64_t slots = binomial(n, k);
  if (slots > kMaxGroundSet)
    throw GroundSetTooLargeError(
        "C(n,k) = " + std::to_string(slots) +
        " k-sets exceed the 64-element ground set");

  // Rank each k-subset by lexicographic order of its sorted vertex list.
  std::vector<Mask> vertex_sets;  // slot -> vertex mask
  {
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
      Mask m = 0;
      for (int c : comb) m |= bit(c);
      vertex_sets.push_back(m);
      int i = k - 1;
      while (i >= 0 && comb[i] == n - k + i) --i;
      if (i < 0) break;
      comb[i]++;
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }

  // Enumerate perfect matchings of the complete k-uniform hypergraph by
  // always matching the lowest uncovered vertex.
  std::vector<Mask> matchings;
  Mask all = full_mask(n);
  std::vector<int> chosen;
  std::function<void(Mask)> build = [&](Mask covered) {
    if (covered == all) {
      Mask slot_mask = 0;
      for (int s : chosen) slot_mask |= bit(s);
      matchings.push_back(slot_mask);
      return;
    }
    int u = std::countr_zero(~covered);
    for (std::size_t s = 0; s < vertex_sets.size(); ++s) {
      Mask vs = vertex_sets[s];
      if (!(vs & bit(u))) continue;
      if (vs & covered) continue;
      chosen.push_back(int(s));
      build(covered | vs);
      chosen.pop_back();
    }
  };
  build(0);
  return MonotoneFamily::from_sets(int(slots), matchings);
}

TribesRegimeReport tribes_regime_report(int n) {
  if (n < 4 || (n & (n - 1)) != 0)
    throw BadParameterError("regime report needs n a power of two, n >= 4");
  TribesRegimeReport rep;
  rep.n = n;
  double l2n = std::log2(double(n));
  int k = int(std::lround(l2n - std::log2(l2n)));
  rep.k = std::max(1, k);
  rep.p_c = dual_tribes_critical_p(double(n), double(rep.k));
  for (int j = 1; j <= 4; ++j) {
    TribesRegimeRow row;
    row.p = std::pow(l2n, -double(j));
    row.ratio = dual_tribes_optimality_ratio(double(n), double(rep.k), row.p);
    row.log2_inv_p = std::log2(1.0 / row.p);
    row.normalized = row.ratio / row.log2_inv_p;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace thresholds
