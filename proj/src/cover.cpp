#include "thresholds/cover.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace thresholds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw DomainError("q must lie in [0, 1], got " + std::to_string(q));
}

// Deterministic redundancy pruning: drop units (sets or whole orbits) that
// are not needed for coverage, scanning from the end.
template <typename Unit, typename CoversFn>
void prune_redundant(std::vector<Unit>& units, const CoversFn& still_covers) {
  for (int i = int(units.size()) - 1; i >= 0; --i) {
    std::vector<Unit> rest;
    rest.reserve(units.size() - 1);
    for (int j = 0; j < int(units.size()); ++j)
      if (j != i) rest.push_back(units[j]);
    if (still_covers(rest)) units = std::move(rest);
  }
}

}  // namespace

SetFamily candidate_sets(const MonotoneFamily& f, int cover_cap) {
  const auto& mins = f.minimal_sets();
  int m = int(mins.size());
  int cap = std::min(cover_cap, kMaskDpHardCap);
  if (m > cap)
    throw TooManyMinimalSetsError(
        "candidate closure covers all 2^m subfamily intersections; capped at "
        "m = " + std::to_string(cap) + ", got m = " + std::to_string(m));
  std::unordered_set<Mask> seen;
  std::vector<Mask> inter(std::size_t{1} << m);
  for (std::uint32_t s = 1; s < (1u << m); ++s) {
    std::uint32_t rest = s & (s - 1);
    int low = std::countr_zero(s);
    inter[s] = rest ? (inter[rest] & mins[low]) : mins[low];
    seen.insert(inter[s]);
  }
  return SetFamily::from_masks(f.n(),
                               std::vector<Mask>(seen.begin(), seen.end()));
}

struct CoverProblem::Impl {
  enum class Engine { kMaskDp, kTwoLevel, kBranchBound };

  MonotoneFamily family;
  std::vector<Mask> minimal;
  std::vector<int> sizes;
  int m = 0;
  Engine engine = Engine::kMaskDp;

  // Engine kMaskDp: candidate pool with coverage bitmasks over minimal sets,
  // indexed by the lowest minimal set they cover.
  std::vector<Mask> cand;
  std::vector<int> cand_size;
  std::vector<std::uint32_t> cand_cov;
  std::vector<std::vector<int>> by_pivot;

  // Engine kTwoLevel: elements shared by at least two minimal sets, with the
  // minimal sets through each, plus per-subset coverage counts built once.
  std::vector<int> slots;
  std::vector<std::uint64_t> covered;  // [subset of slots] -> minimal-set mask
  bool uniform_size = false;

  // Engine kBranchBound: closed candidates (every one is a subset of some
  // minimal set), coverage bitsets over the minimal sets, and per-pivot
  // candidate lists ordered by decreasing size (= nondecreasing cost).
  std::vector<Mask> bb_set;
  std::vector<int> bb_size;
  std::vector<int> bb_cov_count;
  std::vector<std::vector<std::uint64_t>> bb_cov;
  std::vector<std::vector<int>> bb_by_pivot;
  int bb_words = 0;

  explicit Impl(const MonotoneFamily& f, int cover_cap) : family(f) {
    minimal = f.minimal_sets();
    m = int(minimal.size());
    for (Mask s : minimal) sizes.push_back(popcount(s));

    if (m <= std::min(cover_cap, kMaskDpHardCap)) {
      engine = Engine::kMaskDp;
      build_mask_dp();
      return;
    }

    bool pairwise_thin = m <= 64;
    for (int i = 0; pairwise_thin && i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (popcount(minimal[i] & minimal[j]) > 1) {
          pairwise_thin = false;
          break;
        }
    if (pairwise_thin) {
      std::vector<int> through_count(family.n(), 0);
      for (Mask s : minimal)
        for (Mask t = s; t; t &= t - 1) ++through_count[std::countr_zero(t)];
      int ns = 0;
      for (int c : through_count) ns += c >= 2;
      if (ns <= kTwoLevelSlotCap) {
        engine = Engine::kTwoLevel;
        build_two_level();
        return;
      }
    }
    engine = Engine::kBranchBound;
    build_branch_bound();
  }

  void build_mask_dp() {
    SetFamily pool = candidate_sets(family, m);
    // Among candidates with identical coverage keep one of maximal size: its
    // cost q^{|A|} is minimal for every q in [0, 1].
    std::unordered_map<std::uint32_t, Mask> best_by_cov;
    for (Mask a : pool.sets) {
      std::uint32_t cov = 0;
      for (int j = 0; j < m; ++j)
        if ((a & minimal[j]) == a) cov |= 1u << j;
      if (cov == 0) continue;
      auto it = best_by_cov.find(cov);
      if (it == best_by_cov.end() || popcount(a) > popcount(it->second))
        best_by_cov[cov] = a;
      else if (popcount(a) == popcount(it->second) && a < it->second)
        best_by_cov[cov] = a;  // deterministic tie-break
    }
    for (auto& [cov, a] : best_by_cov) {
      cand.push_back(a);
      cand_size.push_back(popcount(a));
      cand_cov.push_back(cov);
    }
    // Canonical candidate order keeps witnesses reproducible.
    std::vector<int> order(cand.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return canonical_less(cand[x], cand[y]);
    });
    std::vector<Mask> c2;
    std::vector<int> s2;
    std::vector<std::uint32_t> v2;
    for (int i : order) {
      c2.push_back(cand[i]);
      s2.push_back(cand_size[i]);
      v2.push_back(cand_cov[i]);
    }
    cand = std::move(c2);
    cand_size = std::move(s2);
    cand_cov = std::move(v2);

    by_pivot.assign(m, {});
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (int j = 0; j < m; ++j)
        if (cand_cov[i] & (1u << j)) by_pivot[j].push_back(int(i));
  }

  void build_two_level() {
    std::vector<std::uint64_t> through(family.n(), 0);
    for (int j = 0; j < m; ++j) {
      Mask s = minimal[j];
      while (s) {
        int e = std::countr_zero(s);
        s &= s - 1;
        through[e] |= std::uint64_t{1} << j;
      }
    }
    std::vector<std::uint64_t> slotcov;
    for (int e = 0; e < family.n(); ++e)
      if (popcount(through[e]) >= 2) {
        slots.push_back(e);
        slotcov.push_back(through[e]);
      }
    int ns = int(slots.size());
    if (ns > kTwoLevelSlotCap)
      throw TooManyMinimalSetsError(
          "two-level cover solver capped at " +
          std::to_string(kTwoLevelSlotCap) + " shared elements, got " +
          std::to_string(ns));
    covered.assign(std::size_t{1} << ns, 0);
    for (std::size_t s = 1; s < covered.size(); ++s) {
      std::size_t rest = s & (s - 1);
      covered[s] = covered[rest] | slotcov[std::countr_zero(s)];
    }
    uniform_size = true;
    for (int sz : sizes)
      if (sz != sizes[0]) uniform_size = false;
  }

  double mask_dp(double q, std::vector<int>* pick) const {
    std::vector<double> cost(cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i)
      cost[i] = std::pow(q, cand_size[i]);
    std::size_t states = std::size_t{1} << m;
    std::uint32_t full = m == 32 ? ~0u : (1u << m) - 1;
    std::vector<double> dist(states, kInf);
    std::vector<int> par_cand;
    std::vector<std::uint32_t> par_prev;
    if (pick) {
      par_cand.assign(states, -1);
      par_prev.assign(states, 0);
    }
    dist[0] = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (dist[mask] == kInf) continue;
      int j = std::countr_zero(~mask);
      for (int i : by_pivot[j]) {
        std::uint32_t nm = mask | cand_cov[i];
        double nd = dist[mask] + cost[i];
        if (nd < dist[nm]) {
          dist[nm] = nd;
          if (pick) {
            par_cand[nm] = i;
            par_prev[nm] = mask;
          }
        }
      }
    }
    if (pick) {
      std::uint32_t at = full;
      while (at != 0) {
        pick->push_back(par_cand[at]);
        at = par_prev[at];
      }
    }
    return dist[full];
  }

  double two_level(double q, std::vector<Mask>* sets) const {
    std::uint64_t all = m == 64 ? ~std::uint64_t{0}
                                : (std::uint64_t{1} << m) - 1;
    double best = 1.0;  // cover by the empty set alone
    std::size_t best_s = covered.size();  // sentinel: empty-set cover
    double qs = uniform_size ? std::pow(q, sizes[0]) : 0.0;
    for (std::size_t s = 0; s < covered.size(); ++s) {
      double base = double(popcount(std::uint64_t(s))) * q;
      if (base >= best) continue;
      double c = base;
      if (uniform_size) {
        c += double(m - popcount(covered[s])) * qs;
      } else {
        std::uint64_t un = all & ~covered[s];
        while (un) {
          int j = std::countr_zero(un);
          un &= un - 1;
          c += std::pow(q, sizes[j]);
          if (c >= best) break;
        }
      }
      if (c < best) {
        best = c;
        best_s = s;
      }
    }
    if (sets) {
      if (best_s == covered.size()) {
        sets->push_back(0);
      } else {
        for (std::size_t t = best_s; t;) {
          int b = std::countr_zero(std::uint64_t(t));
          sets->push_back(bit(slots[b]));
          t &= t - 1;
        }
        std::uint64_t un = all & ~covered[best_s];
        while (un) {
          int j = std::countr_zero(un);
          un &= un - 1;
          sets->push_back(minimal[j]);
        }
      }
    }
    return best;
  }

  void build_branch_bound() {
    if (m > kBranchBoundSetCap)
      throw TooManyMinimalSetsError(
          "cover search capped at " + std::to_string(kBranchBoundSetCap) +
          " minimal sets, got " + std::to_string(m));
    std::uint64_t budget = 0;
    for (int sz : sizes) {
      if (sz > kBranchBoundSubsetBits)
        throw TooManyMinimalSetsError(
            "cover search enumerates subsets of each minimal set; capped at " +
            std::to_string(kBranchBoundSubsetBits) + " elements per set");
      budget += std::uint64_t{1} << sz;
      if (budget > kBranchBoundEnumBudget)
        throw TooManyMinimalSetsError(
            "cover search subset budget exceeded; minimal sets too large");
    }
    bb_words = (m + 63) / 64;

    std::unordered_set<Mask> subs;
    for (Mask base : minimal) {
      Mask a = base;
      while (true) {
        if (a) subs.insert(a);
        if (!a) break;
        a = (a - 1) & base;
      }
    }
    // Each subset is replaced by its closure: the intersection of the minimal
    // sets containing it.  The closure has the same coverage at no greater
    // cost, so only closed sets need to be searched.
    std::unordered_map<Mask, std::vector<std::uint64_t>> pool;
    for (Mask a : subs) {
      std::vector<std::uint64_t> cov(bb_words, 0);
      Mask closure = ~Mask{0};
      for (int j = 0; j < m; ++j)
        if ((a & minimal[j]) == a) {
          cov[j >> 6] |= std::uint64_t{1} << (j & 63);
          closure &= minimal[j];
        }
      pool.try_emplace(closure, std::move(cov));
    }

    std::vector<Mask> keys;
    keys.reserve(pool.size());
    for (const auto& [s, cov] : pool) keys.push_back(s);
    std::sort(keys.begin(), keys.end(), canonical_less);
    for (Mask s : keys) {
      bb_set.push_back(s);
      bb_size.push_back(popcount(s));
      auto& cov = pool[s];
      int cc = 0;
      for (std::uint64_t w : cov) cc += popcount(w);
      bb_cov_count.push_back(cc);
      bb_cov.push_back(std::move(cov));
    }
    bb_by_pivot.assign(m, {});
    for (std::size_t i = 0; i < bb_set.size(); ++i)
      for (int w = 0; w < bb_words; ++w)
        for (std::uint64_t t = bb_cov[i][w]; t; t &= t - 1)
          bb_by_pivot[(w << 6) + std::countr_zero(t)].push_back(int(i));
    for (auto& lst : bb_by_pivot)
      std::sort(lst.begin(), lst.end(), [this](int a, int b) {
        if (bb_size[a] != bb_size[b]) return bb_size[a] > bb_size[b];
        return a < b;
      });
  }

  // Depth-first search over covers built from closed candidates.  The empty
  // set (cost 1, covering everything) is the starting incumbent; a per-set
  // charge bound prunes: any cover pays at least min_i cost_i / |cov_i| for
  // each minimal set it covers.
  struct BranchBoundSearch {
    const Impl& im;
    std::vector<double> cost;
    std::vector<double> charge;
    std::vector<std::uint64_t> done;
    std::vector<std::vector<std::uint64_t>> newly;  // per-depth scratch
    std::vector<int> stack, best_pick;
    double best = 1.0;
    bool improved = false;
    double charge_left = 0;
    std::uint64_t nodes = 0;

    explicit BranchBoundSearch(const Impl& im, double q) : im(im) {
      cost.resize(im.bb_set.size());
      for (std::size_t i = 0; i < cost.size(); ++i)
        cost[i] = std::pow(q, im.bb_size[i]);
      charge.assign(im.m, kInf);
      for (std::size_t i = 0; i < cost.size(); ++i) {
        double ratio = cost[i] / im.bb_cov_count[i];
        for (int w = 0; w < im.bb_words; ++w)
          for (std::uint64_t t = im.bb_cov[i][w]; t; t &= t - 1) {
            int j = (w << 6) + std::countr_zero(t);
            charge[j] = std::min(charge[j], ratio);
          }
      }
      for (double c : charge) charge_left += c;
      done.assign(im.bb_words, 0);
      newly.assign(im.m + 1, std::vector<std::uint64_t>(im.bb_words));
    }

    void dfs(double c) {
      if (++nodes > kBranchBoundNodeCap)
        throw TooManyMinimalSetsError(
            "cover search node budget exceeded; family too irregular for an "
            "exact answer at this size");
      int pivot = -1;
      for (int w = 0; w < im.bb_words && pivot < 0; ++w) {
        std::uint64_t un = ~done[w];
        if (w == im.bb_words - 1 && (im.m & 63))
          un &= (std::uint64_t{1} << (im.m & 63)) - 1;
        if (un) pivot = (w << 6) + std::countr_zero(un);
      }
      if (pivot < 0) {
        if (c < best) {
          best = c;
          best_pick = stack;
          improved = true;
        }
        return;
      }
      auto& fresh = newly[stack.size()];
      for (int i : im.bb_by_pivot[pivot]) {
        double nc = c + cost[i];
        // costs are nondecreasing along the list; the slack keeps rounding
        // drift in the charge sums from reopening exact ties
        if (nc >= best - kBranchBoundSlack) break;
        double dec = 0;
        for (int w = 0; w < im.bb_words; ++w) {
          fresh[w] = im.bb_cov[i][w] & ~done[w];
          done[w] |= fresh[w];
          for (std::uint64_t t = fresh[w]; t; t &= t - 1)
            dec += charge[(w << 6) + std::countr_zero(t)];
        }
        if (nc + charge_left - dec < best - kBranchBoundSlack) {
          charge_left -= dec;
          stack.push_back(i);
          dfs(nc);
          stack.pop_back();
          charge_left += dec;
        }
        for (int w = 0; w < im.bb_words; ++w) done[w] &= ~fresh[w];
      }
    }
  };

  // Dual-feasible charge sum; every cover costs at least this, and the
  // all-of-it cover {emptyset} costs exactly 1.
  double branch_bound_lower(double q) const {
    BranchBoundSearch search(*this, q);
    return std::min(search.charge_left, 1.0);
  }

  double branch_bound(double q, std::vector<Mask>* sets) const {
    BranchBoundSearch search(*this, q);
    if (search.charge_left < search.best - kBranchBoundSlack) search.dfs(0.0);
    if (sets) {
      if (search.improved)
        for (int i : search.best_pick) sets->push_back(bb_set[i]);
      else
        sets->push_back(0);
    }
    return search.best;
  }
};

CoverProblem::CoverProblem(const MonotoneFamily& f, int cover_cap)
    : impl_(std::make_unique<Impl>(f, cover_cap)) {}
CoverProblem::~CoverProblem() = default;
CoverProblem::CoverProblem(CoverProblem&&) noexcept = default;

const MonotoneFamily& CoverProblem::family() const { return impl_->family; }

double CoverProblem::min_cost(double q) const {
  check_q(q);
  switch (impl_->engine) {
    case Impl::Engine::kMaskDp:
      return impl_->mask_dp(q, nullptr);
    case Impl::Engine::kTwoLevel:
      return impl_->two_level(q, nullptr);
    case Impl::Engine::kBranchBound:
      return impl_->branch_bound(q, nullptr);
  }
  return 0;  // unreachable
}

double CoverProblem::cost_lower_bound(double q) const {
  check_q(q);
  if (impl_->engine == Impl::Engine::kBranchBound)
    return impl_->branch_bound_lower(q);
  return min_cost(q);
}

CoverWitness CoverProblem::min_cost_witness(double q) const {
  check_q(q);
  std::vector<Mask> members;
  if (impl_->engine == Impl::Engine::kMaskDp) {
    std::vector<int> pick;
    impl_->mask_dp(q, &pick);
    for (int i : pick) members.push_back(impl_->cand[i]);
  } else if (impl_->engine == Impl::Engine::kTwoLevel) {
    impl_->two_level(q, &members);
  } else {
    impl_->branch_bound(q, &members);
  }

  const MonotoneFamily& fam = impl_->family;
  auto covers_all = [&fam](const std::vector<Mask>& sets) {
    return covers(fam, SetFamily::from_masks(fam.n(), sets));
  };
  prune_redundant(members, covers_all);
  if (!covers_all(members))
    throw std::logic_error("cover witness fails to cover; this is a bug");

  CoverWitness w;
  w.q = q;
  w.generator = SetFamily::from_masks(fam.n(), members);
  w.cost = 0;
  for (Mask a : w.generator.sets) w.cost += std::pow(q, popcount(a));
  return w;
}

CoverWitness min_cover_cost(const MonotoneFamily& f, double q, int cover_cap) {
  CoverProblem prob(f, cover_cap);
  return prob.min_cost_witness(q);
}

QThreshold q_threshold(const MonotoneFamily& f, double tol, int cover_cap) {
  if (!(tol > 0)) throw BadParameterError("tolerance must be positive");
  CoverProblem prob(f, cover_cap);
  // min_cost is continuous and nondecreasing in q, 0 at q = 0 and >= 1 at
  // q = 1, so the supremum of {q : min_cost(q) < 1/2} lies in (0, 1); the
  // lower bisection endpoint always keeps a strictly-cheaper witness.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    // The lower bound settles most steps; costs well above 1/2 can sit in
    // a regime where the exact search is needlessly expensive.
    if (prob.cost_lower_bound(mid) >= 0.5 || prob.min_cost(mid) >= 0.5)
      hi = mid;
    else
      lo = mid;
  }
  return QThreshold{lo, prob.min_cost_witness(lo)};
}

Mask AutomorphismGroup::apply(const std::vector<std::uint8_t>& perm,
                              Mask s) const {
  Mask out = 0;
  while (s) {
    int e = std::countr_zero(s);
    s &= s - 1;
    out |= bit(perm[e]);
  }
  return out;
}

std::vector<int> AutomorphismGroup::orbit_ids(const SetFamily& sets) const {
  std::unordered_map<Mask, int> index;
  for (std::size_t i = 0; i < sets.sets.size(); ++i)
    index[sets.sets[i]] = int(i);
  std::vector<int> root(sets.sets.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = int(i);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t i = 0; i < sets.sets.size(); ++i) {
    for (const auto& perm : elements) {
      Mask t = apply(perm, sets.sets[i]);
      auto it = index.find(t);
      if (it == index.end())
        throw BadParameterError("set collection is not group-invariant: " +
                                mask_to_string(sets.sets[i]) + " maps to " +
                                mask_to_string(t));
      int a = find(int(i)), b = find(it->second);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  }
  // Relabel roots by first occurrence.
  std::unordered_map<int, int> label;
  std::vector<int> ids(sets.sets.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int r = find(int(i));
    auto it = label.find(r);
    if (it == label.end()) it = label.emplace(r, int(label.size())).first;
    ids[i] = it->second;
  }
  return ids;
}

namespace {

struct AutomorphismSearch {
  int n;
  const std::vector<Mask>& mins;
  std::unordered_set<Mask> minset;
  std::vector<std::vector<int>> invariant;   // per element: sizes through it
  std::vector<std::vector<Mask>> by_max;     // minimal sets by max element
  std::vector<std::uint8_t> img;
  Mask used = 0;
  std::vector<std::vector<std::uint8_t>> out;

  AutomorphismSearch(int n, const std::vector<Mask>& mins) : n(n), mins(mins) {
    minset.insert(mins.begin(), mins.end());
    invariant.assign(n, {});
    by_max.assign(n, {});
    for (Mask s : mins) {
      int sz = popcount(s);
      Mask t = s;
      while (t) {
        invariant[std::countr_zero(t)].push_back(sz);
        t &= t - 1;
      }
      by_max[63 - std::countl_zero(s)].push_back(s);
    }
    for (auto& v : invariant) std::sort(v.begin(), v.end());
    img.assign(n, 0);
  }

  void run(int d) {
    if (d == n) {
      out.push_back(img);
      return;
    }
    for (int t = 0; t < n; ++t) {
      if (used & bit(t)) continue;
      if (invariant[d] != invariant[t]) continue;
      img[d] = std::uint8_t(t);
      used |= bit(t);
      bool ok = true;
      // Each minimal set is checked as soon as its last element is mapped.
      for (Mask s : by_max[d]) {
        Mask image = 0;
        Mask rest = s;
        while (rest) {
          image |= bit(img[std::countr_zero(rest)]);
          rest &= rest - 1;
        }
        if (!minset.count(image)) {
          ok = false;
          break;
        }
      }
      if (ok) run(d + 1);
      used &= ~bit(t);
    }
  }
};

}  // namespace

AutomorphismGroup automorphisms(const MonotoneFamily& f, int cap) {
  if (f.n() > cap)
    throw GroundSetTooLargeError(
        "automorphism search capped at n = " + std::to_string(cap) +
        ", got n = " + std::to_string(f.n()));
  AutomorphismSearch search(f.n(), f.minimal_sets());
  search.run(0);
  return AutomorphismGroup{f.n(), std::move(search.out)};
}

AutomorphismGroup close_generators(
    int n, const std::vector<std::vector<std::uint8_t>>& gens) {
  for (const auto& g : gens) {
    if (int(g.size()) != n)
      throw BadParameterError("generator has wrong length");
    Mask seen = 0;
    for (auto v : g) {
      if (int(v) >= n) throw BadParameterError("generator value out of range");
      seen |= bit(v);
    }
    if (seen != full_mask(n))
      throw BadParameterError("generator is not a permutation");
  }
  std::vector<std::uint8_t> identity(n);
  for (int i = 0; i < n; ++i) identity[i] = std::uint8_t(i);
  std::set<std::vector<std::uint8_t>> closed;
  std::vector<std::vector<std::uint8_t>> queue;
  closed.insert(identity);
  queue.push_back(identity);
  while (!queue.empty()) {
    auto cur = queue.back();
    queue.pop_back();
    for (const auto& g : gens) {
      std::vector<std::uint8_t> prod(n);
      for (int i = 0; i < n; ++i) prod[i] = g[cur[i]];
      if (closed.insert(prod).second) queue.push_back(prod);
    }
  }
  return AutomorphismGroup{n, {closed.begin(), closed.end()}};
}

QThreshold q_star(const MonotoneFamily& f, double tol, int cover_cap,
                  const AutomorphismGroup* group) {
  if (!(tol > 0)) throw BadParameterError("tolerance must be positive");
  AutomorphismGroup computed;
  if (!group) {
    computed = automorphisms(f);
    group = &computed;
  } else {
    if (group->n != f.n())
      throw BadParameterError("group ground set does not match family");
    std::unordered_set<Mask> minset(f.minimal_sets().begin(),
                                    f.minimal_sets().end());
    for (const auto& perm : group->elements)
      for (Mask s : f.minimal_sets())
        if (!minset.count(group->apply(perm, s)))
          throw BadParameterError("group does not preserve the family");
  }

  const auto& mins = f.minimal_sets();
  int m = int(mins.size());
  if (m > std::min(cover_cap, kMaskDpHardCap))
    throw TooManyMinimalSetsError(
        "orbit-restricted threshold needs the candidate DP; capped at m = " +
        std::to_string(std::min(cover_cap, kMaskDpHardCap)) + ", got m = " +
        std::to_string(m));

  SetFamily pool = candidate_sets(f, cover_cap);
  std::vector<int> orbit = group->orbit_ids(pool);
  int norb = 0;
  for (int id : orbit) norb = std::max(norb, id + 1);

  // Per orbit: member sizes (for cost) and joint coverage of minimal sets.
  std::vector<std::vector<int>> orbit_sizes(norb);
  std::vector<std::uint32_t> orbit_cov(norb, 0);
  std::vector<std::vector<Mask>> orbit_members(norb);
  for (std::size_t i = 0; i < pool.sets.size(); ++i) {
    Mask a = pool.sets[i];
    std::uint32_t cov = 0;
    for (int j = 0; j < m; ++j)
      if ((a & mins[j]) == a) cov |= 1u << j;
    orbit_sizes[orbit[i]].push_back(popcount(a));
    orbit_cov[orbit[i]] |= cov;
    orbit_members[orbit[i]].push_back(a);
  }
  std::vector<std::vector<int>> by_pivot(m);
  for (int o = 0; o < norb; ++o)
    for (int j = 0; j < m; ++j)
      if (orbit_cov[o] & (1u << j)) by_pivot[j].push_back(o);

  std::uint32_t full = m == 32 ? ~0u : (1u << m) - 1;
  auto solve = [&](double q, std::vector<int>* pick) {
    std::vector<double> cost(norb, 0.0);
    for (int o = 0; o < norb; ++o)
      for (int sz : orbit_sizes[o]) cost[o] += std::pow(q, sz);
    std::vector<double> dist(std::size_t{1} << m, kInf);
    std::vector<int> par_orbit;
    std::vector<std::uint32_t> par_prev;
    if (pick) {
      par_orbit.assign(std::size_t{1} << m, -1);
      par_prev.assign(std::size_t{1} << m, 0);
    }
    dist[0] = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (dist[mask] == kInf) continue;
      int j = std::countr_zero(~mask);
      for (int o : by_pivot[j]) {
        std::uint32_t nm = mask | orbit_cov[o];
        double nd = dist[mask] + cost[o];
        if (nd < dist[nm]) {
          dist[nm] = nd;
          if (pick) {
            par_orbit[nm] = o;
            par_prev[nm] = mask;
          }
        }
      }
    }
    if (pick)
      for (std::uint32_t at = full; at != 0; at = par_prev[at])
        pick->push_back(par_orbit[at]);
    return dist[full];
  };

  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (solve(mid, nullptr) < 0.5)
      lo = mid;
    else
      hi = mid;
  }

  std::vector<int> pick;
  solve(lo, &pick);
  auto covers_all = [&](const std::vector<int>& orbits) {
    std::vector<Mask> sets;
    for (int o : orbits)
      sets.insert(sets.end(), orbit_members[o].begin(), orbit_members[o].end());
    return covers(f, SetFamily::from_masks(f.n(), sets));
  };
  prune_redundant(pick, covers_all);

  std::vector<Mask> members;
  for (int o : pick)
    members.insert(members.end(), orbit_members[o].begin(),
                   orbit_members[o].end());
  CoverWitness w;
  w.q = lo;
  w.generator = SetFamily::from_masks(f.n(), members);
  for (Mask a : w.generator.sets) w.cost += std::pow(lo, popcount(a));
  if (!covers(f, w.generator))
    throw std::logic_error("orbit witness fails to cover; this is a bug");
  return QThreshold{lo, w};
}

}  // namespace thresholds
