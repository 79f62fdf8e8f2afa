#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thresholds/generators.hpp"
#include "thresholds/graphs.hpp"
#include "thresholds/measure.hpp"

using namespace thresholds;
using doctest::Approx;

namespace {

GraphSpec triangle() { return GraphSpec::make(3, {{0, 1}, {1, 2}, {0, 2}}); }
GraphSpec path3() { return GraphSpec::make(4, {{0, 1}, {1, 2}, {2, 3}}); }
GraphSpec matching2() { return GraphSpec::make(4, {{0, 1}, {2, 3}}); }
GraphSpec edge(int v = 2) { return GraphSpec::make(v, {{0, 1}}); }

GraphSpec complete(int v) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < v; ++i)
    for (int j = i + 1; j < v; ++j) e.emplace_back(i, j);
  return GraphSpec::make(v, e);
}

GraphSpec petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);      // outer cycle
    e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    e.emplace_back(i, i + 5);            // spokes
  }
  return GraphSpec::make(10, e);
}

}  // namespace

TEST_CASE("graph canonicalization and validation") {
  auto g = GraphSpec::make(4, {{3, 1}, {0, 2}, {1, 3}});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK_THROWS_AS(GraphSpec::make(3, {{0, 3}}), ValidationError);
  CHECK_THROWS_AS(GraphSpec::make(3, {{1, 1}}), ValidationError);
  CHECK(g.degrees() == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("automorphism counts of named graphs") {
  CHECK(automorphism_count(triangle()) == 6);
  CHECK(automorphism_count(complete(4)) == 24);
  CHECK(automorphism_count(path3()) == 2);
  CHECK(automorphism_count(matching2()) == 8);
  CHECK(automorphism_count(GraphSpec::make(5, {{0, 1}})) == 12);  // 2 * 3!
  CHECK(automorphism_count(petersen()) == 120);
  // 5-cycle: dihedral of order 10
  CHECK(automorphism_count(GraphSpec::make(
            5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})) == 10);
  // edgeless graph: all of S_5
  CHECK(automorphism_count(GraphSpec::make(5, {})) == 120);
  CHECK_THROWS_AS(automorphism_count(GraphSpec::make(11, {{0, 1}})),
                  GraphTooLargeError);
}

TEST_CASE("expectation threshold anchors") {
  // triangle plus an isolated vertex: binding constraint is the triangle,
  // 4!/|Aut| = 4 copies, bound (1/4)^(1/3)
  auto rep = expectation_threshold(GraphSpec::make(4, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(rep.p_e == Approx(std::pow(4.0, -1.0 / 3.0)).epsilon(1e-12));
  CHECK(rep.binding.copies == 4);
  CHECK(rep.binding.edge_count == 3);
  CHECK(rep.constraints.size() == 7);

  auto rep2 = expectation_threshold(matching2());
  CHECK(rep2.p_e == Approx(std::pow(3.0, -1.0 / 2.0)).epsilon(1e-12));
  CHECK(rep2.binding.copies == 3);

  // a single edge on its own two vertices has exactly one copy
  CHECK(expectation_threshold(edge()).p_e == Approx(1.0));
  // padded to 5 vertices: 10 copies
  CHECK(expectation_threshold(edge(5)).p_e == Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(expectation_threshold(GraphSpec::make(3, {})),
                  ValidationError);
}

TEST_CASE("every constraint lies below the reported threshold") {
  for (auto g : {triangle(), path3(), complete(5), petersen()}) {
    std::uint64_t vfact = 1;
    for (int i = 2; i <= g.v; ++i) vfact *= i;
    CHECK(vfact % automorphism_count(g) == 0);
    auto rep = expectation_threshold(g);
    for (const auto& c : rep.constraints) {
      CHECK(c.p_bound <= rep.p_e + 1e-15);
      CHECK(c.copies >= 1);
    }
  }
}

TEST_CASE("densest subgraph") {
  auto t = max_density(triangle());
  CHECK(t.num == 1);
  CHECK(t.den == 1);
  CHECK(t.exponent == Approx(-1.0));

  auto k4 = max_density(complete(4));
  CHECK(k4.num == 3);
  CHECK(k4.den == 2);
  CHECK(k4.exponent == Approx(-2.0 / 3.0));

  auto p = max_density(path3());
  CHECK(p.num == 3);
  CHECK(p.den == 4);
  CHECK(p.witness == std::vector<int>{0, 1, 2, 3});

  // the densest part of a triangle with a pendant edge is the triangle
  auto lollipop = max_density(GraphSpec::make(4, {{0, 1}, {1, 2}, {0, 2},
                                                  {2, 3}}));
  CHECK(lollipop.num == 1);
  CHECK(lollipop.den == 1);
  CHECK(lollipop.witness == std::vector<int>{0, 1, 2});

  CHECK_THROWS_AS(max_density(GraphSpec::make(3, {})), ValidationError);
  CHECK_THROWS_AS(max_density(complete(17), 16), GraphTooLargeError);
}

TEST_CASE("slot indexing is the lexicographic pair order") {
  int n = 6;
  auto pairs = slot_pairs(n);
  REQUIRE(int(pairs.size()) == n * (n - 1) / 2);
  for (int s = 0; s < int(pairs.size()); ++s) {
    auto [i, j] = pairs[s];
    CHECK(slot_index(i, j, n) == s);
    CHECK(slot_index(j, i, n) == s);
  }
}

TEST_CASE("containment families of small patterns") {
  // triangles in K_4: four minimal sets of three slots
  auto tf = containment_family(triangle(), 4);
  CHECK(tf.n() == 6);
  CHECK(tf.minimal_sets().size() == 4);
  for (Mask m : tf.minimal_sets()) CHECK(popcount(m) == 3);

  // one edge in K_3: each slot on its own
  auto ef = containment_family(edge(), 3);
  CHECK(ef.minimal_sets().size() == 3);
  for (Mask m : ef.minimal_sets()) CHECK(popcount(m) == 1);

  // perfect matchings of K_4 equal the 2-uniform matching family
  CHECK(containment_family(matching2(), 4) == hypergraph_matching_family(4, 2));

  CHECK_THROWS_AS(containment_family(triangle(), 2), NoEmbeddingError);
  CHECK_THROWS_AS(containment_family(GraphSpec::make(3, {}), 4),
                  TrivialFamilyError);
  CHECK_THROWS_AS(containment_family(edge(), 12), GroundSetTooLargeError);
}

TEST_CASE("isolated pattern vertices require room but change nothing else") {
  auto with_iso = GraphSpec::make(4, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(containment_family(with_iso, 4) == containment_family(triangle(), 4));
  CHECK_THROWS_AS(containment_family(with_iso, 3), NoEmbeddingError);
}

TEST_CASE("containment measure matches the sampling identity") {
  // mu_p of the containment family equals the probability that G(n,p) has
  // the pattern; spot-check triangles in K_4 by direct enumeration
  auto tf = containment_family(triangle(), 4);
  ExactAnalyzer a(tf);
  for (double p : {0.3, 0.5, 0.7}) {
    double direct = 0;
    for (Mask s = 0; s < (Mask{1} << 6); ++s) {
      std::vector<std::pair<int, int>> edges;
      auto pairs = slot_pairs(4);
      for (int b = 0; b < 6; ++b)
        if ((s >> b) & 1) edges.push_back(pairs[b]);
      GraphSpec g = GraphSpec::make(4, edges);
      // check for a triangle among the 4 vertex triples
      bool found = false;
      auto adj = g.adjacency();
      for (int x = 0; x < 4 && !found; ++x)
        for (int y = x + 1; y < 4 && !found; ++y)
          for (int z = y + 1; z < 4 && !found; ++z)
            if (((adj[x] >> y) & 1) && ((adj[x] >> z) & 1) &&
                ((adj[y] >> z) & 1))
              found = true;
      if (found) {
        double w = 1;
        for (int b = 0; b < 6; ++b) w *= (s >> b) & 1 ? p : 1 - p;
        direct += w;
      }
    }
    CHECK(a.mu(p) == Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("cover threshold of graph families") {
  // single edge on n hosts: C(n,2) singleton slots, threshold 1/(2 C(n,2))
  for (int n : {3, 4, 5}) {
    auto rep = q_of_graph(edge(), n, 1e-10);
    CHECK(rep.q == Approx(1.0 / (n * (n - 1))).epsilon(1e-7));
    // the edge is the tight case: q equals half the padded first-moment
    // threshold exactly
    CHECK(rep.p_e_padded == Approx(2.0 / (n * (n - 1))).epsilon(1e-12));
    CHECK(rep.q >= rep.p_e_padded / 2 - 1e-6);
  }

  // triangles in K_6: the pure-triangle cover wins, 20 q^3 = 1/2
  auto tri6 = q_of_graph(triangle(), 6, 1e-9);
  CHECK(tri6.q == Approx(std::pow(40.0, -1.0 / 3.0)).epsilon(1e-6));
  CHECK(covers(containment_family(triangle(), 6), tri6.witness.generator));
}

TEST_CASE("tree brackets") {
  auto star = tree_threshold_bracket(
      GraphSpec::make(4, {{0, 1}, {0, 2}, {0, 3}}), 1.0, 2.0);
  CHECK(star.max_degree == 3);
  CHECK(star.scale == Approx(0.75));
  CHECK(star.lower == Approx(0.75));
  CHECK(star.upper == Approx(1.5));

  auto path = tree_threshold_bracket(path3());
  CHECK(path.max_degree == 2);
  CHECK(path.scale == Approx(0.5));

  // log-term dominates once the tree is long enough
  std::vector<std::pair<int, int>> line;
  for (int i = 0; i < 15; ++i) line.emplace_back(i, i + 1);
  auto longpath = tree_threshold_bracket(GraphSpec::make(16, line));
  CHECK(longpath.scale == Approx(std::log(16.0) / 16.0));

  CHECK_THROWS_AS(tree_threshold_bracket(triangle()), NotATreeError);
  // right edge count but disconnected (triangle + isolated): not a tree
  CHECK_THROWS_AS(
      tree_threshold_bracket(GraphSpec::make(4, {{0, 1}, {1, 2}, {0, 2}})),
      NotATreeError);
  CHECK_THROWS_AS(tree_threshold_bracket(path3(), 2.0, 1.0),
                  BadParameterError);
}

TEST_CASE("vertex permutations act on slot families") {
  auto g = vertex_induced_automorphisms(4);
  CHECK(g.n == 6);
  CHECK(g.elements.size() == 24);
  auto tf = containment_family(triangle(), 4);
  // the four triangles form a single orbit
  auto ids = g.orbit_ids(SetFamily::from_masks(6, tf.minimal_sets()));
  for (int id : ids) CHECK(id == 0);
}

TEST_CASE("subgraph containment thresholds respect the first moment") {
  // q >= p_E/2 for each pattern/host pair within reach
  for (const auto& h : {edge(), matching2(), path3(), triangle()})
    for (int n : {4, 5}) {
      auto rep = q_of_graph(h, n, 1e-8);
      REQUIRE(std::isfinite(rep.p_e_padded));
      CHECK(rep.q >= rep.p_e_padded / 2 - 1e-6);
    }
}
