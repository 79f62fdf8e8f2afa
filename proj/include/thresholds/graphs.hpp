#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "thresholds/cover.hpp"
#include "thresholds/family.hpp"

namespace thresholds {

constexpr int kDefaultGraphAutCap = 10;
constexpr int kDefaultDensityCap = 16;

// A simple undirected graph on vertices 0..v-1, edges canonical: each pair
// (i, j) with i < j, sorted lexicographically, no duplicates or loops.
struct GraphSpec {
  int v = 0;
  std::vector<std::pair<int, int>> edges;

  static GraphSpec make(int v, std::vector<std::pair<int, int>> edges);

  // Per-vertex neighborhood bitmasks (v <= 64).
  std::vector<Mask> adjacency() const;
  std::vector<int> degrees() const;

  bool operator==(const GraphSpec&) const = default;
};

// |Aut(H)| counted by backtracking over the vertices of positive degree;
// isolated vertices contribute a factorial factor.
std::uint64_t automorphism_count(const GraphSpec& h,
                                 int cap = kDefaultGraphAutCap);

// One first-moment constraint: a nonempty edge subset H' (as a bitmask into
// h.edges), its labelled-copy count v! / |Aut(H')| in the complete graph on
// the same vertex set, and the p at which the expected count reaches 1.
struct SubgraphConstraint {
  std::uint32_t edge_subset = 0;
  int edge_count = 0;
  std::uint64_t copies = 0;
  double p_bound = 0;
};

struct ExpectationThresholdReport {
  double p_e = 0;
  SubgraphConstraint binding;
  std::vector<SubgraphConstraint> constraints;
};

// max over nonempty edge subsets H' of (1 / copies(H'))^(1 / e(H')): the
// probability below which some sub-level expected count drops under 1.
ExpectationThresholdReport expectation_threshold(const GraphSpec& h);

struct MaxDensityReport {
  std::uint64_t num = 0;     // edges of the densest subgraph
  std::uint64_t den = 0;     // its vertices
  std::vector<int> witness;  // the vertex set attaining it
  double exponent = 0;       // -den / num
};

// max over vertex subsets W with at least one edge of e(W) / |W|, exact as a
// reduced fraction.
MaxDensityReport max_density(const GraphSpec& h, int cap = kDefaultDensityCap);

// Edge-slot index of the pair (i, j), i < j, among the C(n,2) slots of the
// complete graph on n vertices, ordered lexicographically.
int slot_index(int i, int j, int n);
std::vector<std::pair<int, int>> slot_pairs(int n);

// The monotone family, on ground set = edge slots of K_n, of graphs
// containing a copy of h.  Minimal sets are the edge sets of the injective
// embeddings of h's positive-degree core.
MonotoneFamily containment_family(const GraphSpec& h, int n);

struct GraphCoverReport {
  int n = 0;
  double q = 0;
  CoverWitness witness;
  double p_e_padded = 0;  // expectation threshold of h padded to n vertices;
                          // NaN when n is past the subset-enumeration cap
};

// Cover threshold of the containment family, plus the padded expectation
// threshold for comparison.
GraphCoverReport q_of_graph(const GraphSpec& h, int n, double tol = 1e-9);

struct TreeBracket {
  int max_degree = 0;
  double scale = 0;  // max(log(v)/v, max_degree/v)
  double lower = 0;
  double upper = 0;
};

// Threshold bracket for spanning-tree containment: both sides are the same
// scale function times the supplied constants.
TreeBracket tree_threshold_bracket(const GraphSpec& t, double k1 = 1.0,
                                   double k2 = 1.0);

// The edge-slot permutation group induced by all vertex permutations of K_n.
AutomorphismGroup vertex_induced_automorphisms(int n);

}  // namespace thresholds
