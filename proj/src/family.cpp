#include "thresholds/family.hpp"

#include <algorithm>
#include <unordered_set>

namespace thresholds {

std::vector<int> mask_to_elements(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

Mask elements_to_mask(const std::vector<int>& elems, int n) {
  Mask m = 0;
  for (int e : elems) {
    if (e < 0 || e >= n)
      throw ValidationError("element " + std::to_string(e) +
                            " out of range for ground set of size " +
                            std::to_string(n));
    m |= bit(e);
  }
  return m;
}

std::string mask_to_string(Mask m) {
  std::string s = "{";
  bool first = true;
  for (int e : mask_to_elements(m)) {
    if (!first) s += ",";
    s += std::to_string(e);
    first = false;
  }
  return s + "}";
}

static void check_ground_set(int n) {
  if (n < 1 || n > kMaxGroundSet)
    throw ValidationError("ground set size must be in [1, 64], got " +
                          std::to_string(n));
}

static void check_in_range(int n, const std::vector<Mask>& sets) {
  Mask full = full_mask(n);
  for (Mask s : sets)
    if (s & ~full)
      throw ValidationError("set " + mask_to_string(s) +
                            " has elements outside the ground set of size " +
                            std::to_string(n));
}

SetFamily SetFamily::from_masks(int n, std::vector<Mask> sets) {
  check_ground_set(n);
  check_in_range(n, sets);
  std::sort(sets.begin(), sets.end(), canonical_less);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return SetFamily{n, std::move(sets)};
}

MonotoneFamily MonotoneFamily::from_sets(int n, const std::vector<Mask>& sets,
                                         std::vector<Mask>* removed) {
  check_ground_set(n);
  if (sets.empty())
    throw TrivialFamilyError("no generating sets: the empty family is trivial");
  check_in_range(n, sets);
  for (Mask s : sets)
    if (s == 0)
      throw TrivialFamilyError(
          "the empty set generates the full power set, which is trivial");

  std::vector<Mask> work(sets);
  std::sort(work.begin(), work.end(), canonical_less);
  work.erase(std::unique(work.begin(), work.end()), work.end());

  // After the canonical sort a set can only be dominated by an earlier,
  // strictly smaller one.
  std::vector<Mask> minimal;
  std::vector<Mask> dropped;
  std::size_t level_begin = 0;  // start of the current-cardinality run
  int level_card = -1;
  for (Mask s : work) {
    int c = popcount(s);
    if (c != level_card) {
      level_card = c;
      level_begin = minimal.size();
    }
    bool dominated = false;
    for (std::size_t i = 0; i < level_begin; ++i) {
      if ((minimal[i] & s) == minimal[i]) {
        dominated = true;
        break;
      }
    }
    if (dominated)
      dropped.push_back(s);
    else
      minimal.push_back(s);
  }
  if (removed) *removed = std::move(dropped);
  return MonotoneFamily(n, std::move(minimal));
}

bool MonotoneFamily::contains(Mask s) const {
  for (Mask m : minimal_)
    if ((m & s) == m) return true;
  return false;
}

MonotoneFamily upset_of(const SetFamily& g) {
  return MonotoneFamily::from_sets(g.n, g.sets);
}

bool covers(const MonotoneFamily& f, const SetFamily& g) {
  if (f.n() != g.n)
    throw ValidationError("cover check requires matching ground sets (" +
                          std::to_string(f.n()) + " vs " + std::to_string(g.n) +
                          ")");
  for (Mask m : f.minimal_sets()) {
    bool hit = false;
    for (Mask a : g.sets) {
      if ((a & m) == a) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

namespace {

// Enumerates every minimal transversal exactly once: branch on the elements
// of the first unhit set, banning elements already tried in earlier sibling
// branches, and keep only leaves where each chosen element critically hits
// some set on its own.
struct TransversalSearch {
  const std::vector<Mask>& sets;
  std::vector<Mask> out;

  void run(Mask chosen, Mask banned) {
    Mask unhit = 0;
    bool found = false;
    for (Mask s : sets) {
      if ((s & chosen) == 0) {
        unhit = s;
        found = true;
        break;
      }
    }
    if (!found) {
      Mask critical = 0;
      for (Mask s : sets) {
        Mask h = s & chosen;
        if (popcount(h) == 1) critical |= h;
      }
      if (critical == chosen) out.push_back(chosen);
      return;
    }
    Mask cand = unhit & ~banned;
    while (cand) {
      Mask b = cand & (~cand + 1);
      run(chosen | b, banned);
      banned |= b;
      cand &= cand - 1;
    }
  }
};

}  // namespace

std::vector<Mask> minimal_transversals(const std::vector<Mask>& sets, int n) {
  check_ground_set(n);
  check_in_range(n, sets);
  TransversalSearch search{sets, {}};
  search.run(0, 0);
  std::sort(search.out.begin(), search.out.end(), canonical_less);
  return search.out;
}

MonotoneFamily dual(const MonotoneFamily& f, int cap) {
  if (f.n() > cap)
    throw GroundSetTooLargeError(
        "dualization capped at n = " + std::to_string(cap) + ", got n = " +
        std::to_string(f.n()));
  return MonotoneFamily::from_sets(
      f.n(), minimal_transversals(f.minimal_sets(), f.n()));
}

MembershipTable::MembershipTable(const MonotoneFamily& f, int cap)
    : n_(f.n()) {
  int eff = std::min(cap, kHardEnumCap);
  if (n_ > eff)
    throw GroundSetTooLargeError(
        "full enumeration capped at n = " + std::to_string(eff) +
        ", got n = " + std::to_string(n_));

  std::size_t nwords = n_ < 6 ? 1 : (std::size_t{1} << (n_ - 6));
  words_.assign(nwords, 0);
  for (Mask m : f.minimal_sets()) words_[m >> 6] |= Mask{1} << (m & 63);

  // Upward closure, one coordinate at a time: everything containing a member
  // after inserting coordinate d is a member.  Coordinates below 6 act inside
  // a word, the rest act as a word stride.
  for (int d = 0; d < std::min(n_, 6); ++d) {
    int shift = 1 << d;
    std::uint64_t lows = 0x5555555555555555ull;  // d = 0 pattern
    switch (d) {
      case 0: lows = 0x5555555555555555ull; break;
      case 1: lows = 0x3333333333333333ull; break;
      case 2: lows = 0x0f0f0f0f0f0f0f0full; break;
      case 3: lows = 0x00ff00ff00ff00ffull; break;
      case 4: lows = 0x0000ffff0000ffffull; break;
      case 5: lows = 0x00000000ffffffffull; break;
    }
    for (auto& w : words_) w |= (w & lows) << shift;
  }
  for (int d = 6; d < n_; ++d) {
    std::size_t stride = std::size_t{1} << (d - 6);
    for (std::size_t base = 0; base < nwords; base += 2 * stride)
      for (std::size_t i = 0; i < stride; ++i)
        words_[base + stride + i] |= words_[base + i];
  }
}

std::uint64_t LevelProfile::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

LevelProfile level_profile(const MonotoneFamily& f, int cap) {
  MembershipTable table(f, cap);
  LevelProfile prof;
  prof.counts.assign(f.n() + 1, 0);
  const auto& words = table.words();
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    while (w) {
      int b = std::countr_zero(w);
      Mask s = (Mask(wi) << 6) | Mask(b);
      prof.counts[popcount(s)]++;
      w &= w - 1;
    }
  }
  return prof;
}

}  // namespace thresholds
