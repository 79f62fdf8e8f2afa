#include "thresholds/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace thresholds {

namespace {

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= std::uint64_t(i);
  return f;
}

// Count of automorphisms of the graph restricted to the given vertex list
// (which must be closed under adjacency).  Plain backtracking with degree and
// partial-adjacency pruning.
struct GraphAutCount {
  const std::vector<Mask>& adj;
  const std::vector<int>& verts;   // vertices being permuted
  std::vector<int> deg;
  std::vector<int> img;            // position -> image vertex
  Mask used = 0;
  std::uint64_t count = 0;

  GraphAutCount(const std::vector<Mask>& adj, const std::vector<int>& verts)
      : adj(adj), verts(verts) {
    for (Mask a : adj) deg.push_back(popcount(a));
    img.assign(verts.size(), -1);
  }

  void run(std::size_t d) {
    if (d == verts.size()) {
      ++count;
      return;
    }
    int u = verts[d];
    for (int w : verts) {
      if (used & bit(w)) continue;
      if (deg[u] != deg[w]) continue;
      bool ok = true;
      for (std::size_t e = 0; e < d && ok; ++e)
        if (((adj[u] >> verts[e]) & 1) != ((adj[w] >> img[e]) & 1)) ok = false;
      if (!ok) continue;
      img[d] = w;
      used |= bit(w);
      run(d + 1);
      used &= ~bit(w);
    }
  }
};

}  // namespace

GraphSpec GraphSpec::make(int v, std::vector<std::pair<int, int>> edges) {
  if (v < 1 || v > 64)
    throw ValidationError("vertex count must be in [1, 64], got " +
                          std::to_string(v));
  for (auto& [a, b] : edges) {
    if (a < 0 || a >= v || b < 0 || b >= v)
      throw ValidationError("edge (" + std::to_string(a) + ", " +
                            std::to_string(b) + ") out of range for " +
                            std::to_string(v) + " vertices");
    if (a == b)
      throw ValidationError("loop at vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return GraphSpec{v, std::move(edges)};
}

std::vector<Mask> GraphSpec::adjacency() const {
  std::vector<Mask> adj(v, 0);
  for (auto [a, b] : edges) {
    adj[a] |= bit(b);
    adj[b] |= bit(a);
  }
  return adj;
}

std::vector<int> GraphSpec::degrees() const {
  std::vector<int> deg(v, 0);
  for (auto [a, b] : edges) {
    deg[a]++;
    deg[b]++;
  }
  return deg;
}

std::uint64_t automorphism_count(const GraphSpec& h, int cap) {
  if (h.v > cap)
    throw GraphTooLargeError("automorphism count capped at " +
                             std::to_string(cap) + " vertices, got " +
                             std::to_string(h.v));
  auto adj = h.adjacency();
  std::vector<int> core;
  int isolated = 0;
  for (int u = 0; u < h.v; ++u) {
    if (adj[u])
      core.push_back(u);
    else
      ++isolated;
  }
  std::uint64_t core_count = 1;
  if (!core.empty()) {
    GraphAutCount search(adj, core);
    search.run(0);
    core_count = search.count;
  }
  return core_count * factorial(isolated);
}

ExpectationThresholdReport expectation_threshold(const GraphSpec& h) {
  int ne = int(h.edges.size());
  if (h.v > kDefaultGraphAutCap)
    throw GraphTooLargeError("expectation threshold capped at " +
                             std::to_string(kDefaultGraphAutCap) +
                             " vertices, got " + std::to_string(h.v));
  if (ne == 0)
    throw ValidationError("expectation threshold needs at least one edge");
  if (ne > 24)
    throw GraphTooLargeError("expectation threshold enumerates 2^e edge "
                             "subsets; capped at 24 edges");
  std::uint64_t vfact = factorial(h.v);
  ExpectationThresholdReport rep;
  rep.p_e = 0;
  rep.constraints.reserve((std::size_t{1} << ne) - 1);
  for (std::uint32_t s = 1; s < (1u << ne); ++s) {
    std::vector<std::pair<int, int>> sub;
    for (std::uint32_t t = s; t;) {
      int e = std::countr_zero(t);
      t &= t - 1;
      sub.push_back(h.edges[e]);
    }
    GraphSpec hs{h.v, std::move(sub)};
    std::uint64_t aut = automorphism_count(hs, kDefaultGraphAutCap);
    std::uint64_t copies = vfact / aut;
    SubgraphConstraint c;
    c.edge_subset = s;
    c.edge_count = popcount(Mask(s));
    c.copies = copies;
    c.p_bound = std::pow(double(copies), -1.0 / c.edge_count);
    if (c.p_bound > rep.p_e) {
      rep.p_e = c.p_bound;
      rep.binding = c;
    }
    rep.constraints.push_back(c);
  }
  return rep;
}

MaxDensityReport max_density(const GraphSpec& h, int cap) {
  if (h.v > cap)
    throw GraphTooLargeError("density search capped at " + std::to_string(cap) +
                             " vertices, got " + std::to_string(h.v));
  if (h.edges.empty())
    throw ValidationError("density is undefined without edges");
  auto adj = h.adjacency();
  MaxDensityReport best;
  for (Mask w = 1; w < (Mask{1} << h.v); ++w) {
    std::uint64_t e2 = 0;
    for (Mask t = w; t;) {
      int u = std::countr_zero(t);
      t &= t - 1;
      e2 += popcount(adj[u] & w);
    }
    std::uint64_t e = e2 / 2;
    if (e == 0) continue;
    std::uint64_t vv = popcount(w);
    // compare e / vv > best.num / best.den by cross multiplication
    if (best.den == 0 || e * best.den > best.num * vv) {
      best.num = e;
      best.den = vv;
      best.witness = mask_to_elements(w);
    }
  }
  std::uint64_t g = std::gcd(best.num, best.den);
  best.num /= g;
  best.den /= g;
  best.exponent = -double(best.den) / double(best.num);
  return best;
}

int slot_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<std::pair<int, int>> slot_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(std::size_t(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

MonotoneFamily containment_family(const GraphSpec& h, int n) {
  if (h.edges.empty())
    throw TrivialFamilyError(
        "an edgeless pattern is contained in every graph");
  if (n < 1)
    throw ValidationError("need at least one host vertex");
  int slots = n * (n - 1) / 2;
  if (slots > kMaxGroundSet)
    throw GroundSetTooLargeError(
        "edge slots C(n,2) = " + std::to_string(slots) +
        " exceed the 64-element ground set (n = " + std::to_string(n) + ")");

  // Work with the positive-degree core; isolated pattern vertices only
  // require n >= v(h), not any particular placement.
  auto deg = h.degrees();
  std::vector<int> core;
  for (int u = 0; u < h.v; ++u)
    if (deg[u] > 0) core.push_back(u);
  if (n < h.v)
    throw NoEmbeddingError("pattern has " + std::to_string(h.v) +
                           " vertices but the host only " + std::to_string(n));

  std::vector<int> pos(h.v, -1);  // core vertex -> host vertex
  std::unordered_set<Mask> images;
  Mask used = 0;
  // Enumerate injective placements of the core into 0..n-1.
  std::function<void(std::size_t)> place = [&](std::size_t d) {
    if (d == core.size()) {
      Mask edge_mask = 0;
      for (auto [a, b] : h.edges)
        edge_mask |= bit(slot_index(pos[a], pos[b], n));
      images.insert(edge_mask);
      return;
    }
    int u = core[d];
    for (int t = 0; t < n; ++t) {
      if (used & bit(t)) continue;
      pos[u] = t;
      used |= bit(t);
      place(d + 1);
      used &= ~bit(t);
    }
  };
  place(0);
  return MonotoneFamily::from_sets(
      slots, std::vector<Mask>(images.begin(), images.end()));
}

GraphCoverReport q_of_graph(const GraphSpec& h, int n, double tol) {
  GraphCoverReport rep;
  rep.n = n;
  MonotoneFamily fam = containment_family(h, n);
  QThreshold qt = q_threshold(fam, tol, kMaskDpHardCap);
  rep.q = qt.q;
  rep.witness = qt.witness;
  if (n <= kDefaultGraphAutCap && int(h.edges.size()) <= 24) {
    GraphSpec padded{n, h.edges};
    rep.p_e_padded = expectation_threshold(padded).p_e;
  } else {
    rep.p_e_padded = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

TreeBracket tree_threshold_bracket(const GraphSpec& t, double k1, double k2) {
  if (int(t.edges.size()) != t.v - 1)
    throw NotATreeError("a tree on " + std::to_string(t.v) +
                        " vertices has exactly " + std::to_string(t.v - 1) +
                        " edges, got " + std::to_string(t.edges.size()));
  // Connectivity check by BFS over adjacency masks.
  if (t.v > 64) throw GraphTooLargeError("tree bracket capped at 64 vertices");
  auto adj = t.adjacency();
  Mask seen = bit(0);
  Mask frontier = bit(0);
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f;) {
      int u = std::countr_zero(f);
      f &= f - 1;
      next |= adj[u] & ~seen;
    }
    seen |= next;
    frontier = next;
  }
  if (seen != full_mask(t.v))
    throw NotATreeError("graph is not connected");
  if (!(k1 > 0) || !(k2 > 0) || k1 > k2)
    throw BadParameterError("need 0 < k1 <= k2");
  int delta = 0;
  for (int d : t.degrees()) delta = std::max(delta, d);
  TreeBracket br;
  br.max_degree = delta;
  br.scale = std::max(std::log(double(t.v)) / t.v, double(delta) / t.v);
  br.lower = k1 * br.scale;
  br.upper = k2 * br.scale;
  return br;
}

AutomorphismGroup vertex_induced_automorphisms(int n) {
  if (n < 2 || n > 8)
    throw GroundSetTooLargeError(
        "vertex-induced slot group supported for 2 <= n <= 8");
  int slots = n * (n - 1) / 2;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  AutomorphismGroup g;
  g.n = slots;
  do {
    std::vector<std::uint8_t> slot_perm(slots);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        slot_perm[slot_index(i, j, n)] =
            std::uint8_t(slot_index(perm[i], perm[j], n));
    g.elements.push_back(std::move(slot_perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return g;
}

}  // namespace thresholds
