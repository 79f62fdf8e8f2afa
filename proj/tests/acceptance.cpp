// Acceptance gate: twelve checks covering the exact analysis, cover
// thresholds, graph reports, generators and Monte Carlo estimators.  Each
// check prints one PASS/FAIL line; the exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thresholds/cover.hpp"
#include "thresholds/generators.hpp"
#include "thresholds/graphs.hpp"
#include "thresholds/json_io.hpp"
#include "thresholds/measure.hpp"
#include "thresholds/simulate.hpp"

using namespace thresholds;

namespace {

struct Outcome {
  long checks = 0;
  long failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// The shared random-family corpus: 1000 families over ground sets of 3..10
// elements, seeded so every run sees the same instances.
const std::vector<MonotoneFamily>& corpus() {
  static std::vector<MonotoneFamily> fams = [] {
    std::vector<MonotoneFamily> out;
    out.reserve(1000);
    for (int i = 0; i < 1000; ++i)
      out.push_back(random_monotone(3 + i % 8, 2 + i % 7, 1000 + i));
    return out;
  }();
  return fams;
}

const std::vector<double>& nine_ps() {
  static std::vector<double> ps = [] {
    std::vector<double> out;
    for (int j = 1; j <= 9; ++j) out.push_back(j / 10.0);
    return out;
  }();
  return ps;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

using Body = std::function<void(Outcome&)>;

// ---- 1: subcubes sit exactly on the isoperimetric bound ----
void subcube_equality(Outcome& t) {
  for (int r = 1; r <= 3; ++r) {
    for (int n = 3; n <= 10; ++n) {
      ExactAnalyzer a(subcube(n, (Mask{1} << r) - 1));
      for (int j = 1; j <= 19; ++j) {
        double p = 0.05 * j;
        AnalysisReport rep = a.report(p);
        t.expect(std::fabs(rep.iso_gap) <= 1e-9,
                 "iso_gap " + fmt(rep.iso_gap) + " at |R|=" +
                     std::to_string(r) + " n=" + std::to_string(n) +
                     " p=" + fmt(p));
        t.expect(std::fabs(rep.ratio - 1.0) <= 1e-9,
                 "ratio " + fmt(rep.ratio) + " at |R|=" + std::to_string(r) +
                     " n=" + std::to_string(n) + " p=" + fmt(p));
      }
    }
  }
}

// ---- 2: the isoperimetric gap is nonnegative on the whole corpus ----
void gap_nonnegative(Outcome& t) {
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    ExactAnalyzer a(corpus()[i]);
    for (double p : nine_ps()) {
      double g = a.iso_gap(p);
      t.expect(g >= -1e-9, "iso_gap " + fmt(g) + " on family " +
                               std::to_string(i) + " at p=" + fmt(p));
    }
  }
}

// ---- 3: the measure derivative equals the total influence ----
void derivative_is_influence(Outcome& t) {
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    ExactAnalyzer a(corpus()[i]);
    for (double p : nine_ps()) {
      double r = russo_residual(a, p);
      t.expect(r <= 1e-8, "residual " + fmt(r) + " on family " +
                              std::to_string(i) + " at p=" + fmt(p));
    }
  }
}

// ---- 4: the two-point entropy inequality holds on a grid ----
void entropy_lemma(Outcome& t) {
  for (int ia = 1; ia <= 50; ++ia) {
    double a = ia / 50.0;
    for (int ib = ia; ib <= 50; ++ib) {
      double b = ib / 50.0;
      for (double p : nine_ps()) {
        double g = iso_lemma_gap(a, b, p);
        t.expect(g >= -1e-12, "gap " + fmt(g) + " at a=" + fmt(a) +
                                  " b=" + fmt(b) + " p=" + fmt(p));
        if (ia == ib)
          t.expect(std::fabs(g) <= 1e-12, "diagonal gap " + fmt(g) +
                                              " at a=" + fmt(a) +
                                              " p=" + fmt(p));
      }
    }
  }
}

// ---- 5: the near-critical witness search succeeds on every family ----
void sweep_always_succeeds(Outcome& t) {
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    ExactAnalyzer a(corpus()[i]);
    for (double eps : {0.25, 0.5, 1.0}) {
      try {
        OptimalPResult r = optimal_p_sweep(a, eps);
        t.expect(r.ratio <= r.bound + 1e-12,
                 "witness ratio above its bound on family " +
                     std::to_string(i) + " eps=" + fmt(eps));
      } catch (const std::exception& e) {
        t.expect(false, std::string("sweep failed on family ") +
                            std::to_string(i) + " eps=" + fmt(eps) + ": " +
                            e.what());
      }
    }
  }
}

// ---- 6: cover thresholds vs critical probability, and the DP vs a
//         brute-force oracle on small instances ----
void cover_vs_critical(Outcome& t) {
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const MonotoneFamily& f = corpus()[i];
    ExactAnalyzer a(f);
    double pc = a.critical_probability(1e-9);
    QThreshold qt = q_threshold(f, 1e-9, kMaskDpHardCap);
    t.expect(qt.q <= pc + 1e-6, "q " + fmt(qt.q) + " > p_c " + fmt(pc) +
                                    " on family " + std::to_string(i));
    if (f.n() <= kDefaultAutomorphismCap) {
      QThreshold qs = q_star(f, 1e-9, kMaskDpHardCap);
      t.expect(qs.q <= qt.q + 1e-6, "q* " + fmt(qs.q) + " > q " + fmt(qt.q) +
                                        " on family " + std::to_string(i));
    }
  }
  for (int i = 0; i < 100; ++i) {
    MonotoneFamily f = random_monotone(2 + i % 4, 1 + i % 5, 5000 + i);
    CoverProblem prob(f, kMaskDpHardCap);
    for (double q : nine_ps()) {
      double got = prob.min_cost(q);
      double want = oracles::min_cover_cost(f, q);
      t.expect(std::fabs(got - want) <= 1e-9,
               "cover cost " + fmt(got) + " vs oracle " + fmt(want) +
                   " on instance " + std::to_string(i) + " q=" + fmt(q));
    }
  }
}

// ---- 7: closed-form anchor constants ----
void anchors(Outcome& t) {
  double q_maj3 = q_threshold(majority(3), 1e-9).q;
  t.expect(std::fabs(q_maj3 - 1.0 / std::sqrt(6.0)) <= 1e-6,
           "majority-3 cover threshold " + fmt(q_maj3));

  MonotoneFamily sc = subcube(4, 0b11);
  double root2 = 1.0 / std::sqrt(2.0);
  double q_sc = q_threshold(sc, 1e-12).q;
  double pc_sc = critical_probability(sc, 1e-12);
  t.expect(std::fabs(q_sc - root2) <= 1e-9, "subcube cover threshold " +
                                                fmt(q_sc));
  t.expect(std::fabs(pc_sc - root2) <= 1e-9, "subcube critical p " +
                                                 fmt(pc_sc));

  GraphSpec tri_iso = GraphSpec::make(4, {{0, 1}, {1, 2}, {0, 2}});
  double pe_tri = expectation_threshold(tri_iso).p_e;
  t.expect(std::fabs(pe_tri - std::pow(4.0, -1.0 / 3.0)) <= 1e-9,
           "triangle+isolated expectation threshold " + fmt(pe_tri));

  GraphSpec m2 = GraphSpec::make(4, {{0, 1}, {2, 3}});
  double pe_m2 = expectation_threshold(m2).p_e;
  t.expect(std::fabs(pe_m2 - 1.0 / std::sqrt(3.0)) <= 1e-9,
           "2-edge matching expectation threshold " + fmt(pe_m2));
}

// ---- 8: block-family closed forms match enumeration; scaled-k regime ----
void block_closed_forms(Outcome& t) {
  const std::pair<int, int> params[] = {{4, 2}, {6, 2}, {6, 3}, {8, 2}, {9, 3}};
  for (auto [n, k] : params) {
    TribesParams tp(n, k);
    MonotoneFamily f = dual_tribes(tp);
    ExactAnalyzer a(f);
    double pc_closed = dual_tribes_critical_p(n, k);
    double pc_exact = a.critical_probability(1e-12);
    t.expect(std::fabs(pc_closed - pc_exact) <= 1e-9,
             "critical p " + fmt(pc_closed) + " vs " + fmt(pc_exact) +
                 " at (" + std::to_string(n) + "," + std::to_string(k) + ")");
    std::vector<double> ps = nine_ps();
    ps.push_back(pc_closed);
    for (double p : ps) {
      TribesValues v = tribes_closed_forms(tp, p);
      t.expect(std::fabs(v.m - a.mu(p)) <= 1e-9,
               "mu mismatch " + fmt(v.m - a.mu(p)) + " at (" +
                   std::to_string(n) + "," + std::to_string(k) +
                   ") p=" + fmt(p));
      t.expect(std::fabs(v.m_prime - a.mu_derivative(p)) <= 1e-9,
               "mu' mismatch " + fmt(v.m_prime - a.mu_derivative(p)) +
                   " at (" + std::to_string(n) + "," + std::to_string(k) +
                   ") p=" + fmt(p));
    }
  }
  for (int n : {16, 64, 256, 1024}) {
    TribesRegimeReport rep = tribes_regime_report(n);
    t.expect(rep.p_c > 0.01 && rep.p_c < 0.99,
             "regime critical p " + fmt(rep.p_c) + " out of range at n=" +
                 std::to_string(n));
  }
}

// ---- 9: graph cover threshold at least half the padded first-moment
//         threshold ----
void graph_cover_vs_first_moment(Outcome& t) {
  GraphSpec edge = GraphSpec::make(2, {{0, 1}});
  GraphSpec m2 = GraphSpec::make(4, {{0, 1}, {2, 3}});
  GraphSpec p3 = GraphSpec::make(4, {{0, 1}, {1, 2}, {2, 3}});
  GraphSpec tri = GraphSpec::make(3, {{0, 1}, {1, 2}, {0, 2}});
  const GraphSpec* hs[] = {&edge, &m2, &p3, &tri};
  const char* names[] = {"edge", "matching", "path", "triangle"};
  for (int hi = 0; hi < 4; ++hi) {
    for (int n = 4; n <= 6; ++n) {
      GraphCoverReport rep = q_of_graph(*hs[hi], n, 1e-9);
      t.expect(rep.q >= rep.p_e_padded / 2 - 1e-6,
               std::string(names[hi]) + " at n=" + std::to_string(n) +
                   ": q " + fmt(rep.q) + " < p_e/2 " +
                   fmt(rep.p_e_padded / 2));
    }
  }
}

// ---- 10: Monte Carlo brackets contain the exact critical probability ----
void mc_brackets(Outcome& t) {
  struct Target {
    PropertySpec prop;
    double exact;
    std::uint64_t seed0;
    const char* name;
  };
  GraphSpec m2 = GraphSpec::make(4, {{0, 1}, {2, 3}});
  GraphSpec edge = GraphSpec::make(2, {{0, 1}});
  // exact critical p: 2-edge matching on 4 from its degree-6 measure
  // polynomial, single edge on 5 in closed form 1 - 2^(-1/10)
  Target targets[] = {
      {PropertySpec::subgraph(4, m2), critical_probability(
                                          containment_family(m2, 4), 1e-12),
       4242, "matching-in-4"},
      {PropertySpec::subgraph(5, edge), 1.0 - std::pow(2.0, -0.1), 9191,
       "edge-in-5"},
  };
  for (const Target& target : targets) {
    int contained = 0, conclusive = 0;
    for (int rep = 0; rep < 100; ++rep) {
      EmpiricalPc r = empirical_critical_p(target.prop, 0.01, 0.95,
                                           target.seed0 + rep, 10000);
      if (r.lo <= target.exact && target.exact <= r.hi) ++contained;
      if (r.conclusive) ++conclusive;
    }
    t.expect(contained >= 95,
             std::string(target.name) + ": only " +
                 std::to_string(contained) + "/100 brackets contained " +
                 fmt(target.exact) + " (" + std::to_string(conclusive) +
                 " conclusive)");
  }
}

// ---- 11: subset-DP checkers agree with exhaustive search ----
void checkers_vs_exhaustive(Outcome& t) {
  for (int i = 0; i < 500; ++i) {
    int v = 4 + i % 5;  // 4..8
    double p = 0.25 + 0.25 * (i % 3);
    Rng rng(stream_seed(7100, i));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < v; ++a)
      for (int b = a + 1; b < v; ++b)
        if (rng.bernoulli(p)) edges.emplace_back(a, b);
    GraphSpec g = GraphSpec::make(v, edges);
    t.expect(has_hamilton_cycle(g) == oracles::hamilton(g),
             "hamilton mismatch on instance " + std::to_string(i));
  }
  for (int i = 0; i < 500; ++i) {
    int v = 3 * (1 + i % 2);  // 3 or 6
    double p = 0.3 + 0.2 * (i % 3);
    Rng rng(stream_seed(7200, i));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < v; ++a)
      for (int b = a + 1; b < v; ++b)
        if (rng.bernoulli(p)) edges.emplace_back(a, b);
    GraphSpec g = GraphSpec::make(v, edges);
    t.expect(has_triangle_factor(g) == oracles::triangle_factor(g),
             "triangle-factor mismatch on instance " + std::to_string(i));
  }
  const std::pair<int, int> shapes[] = {{4, 2}, {6, 2}, {6, 3},
                                        {8, 2}, {8, 4}, {9, 3}};
  for (int i = 0; i < 500; ++i) {
    auto [n, k] = shapes[i % 6];
    double p = 0.2 + 0.3 * (i % 3);
    Rng rng(stream_seed(7300, i));
    HypergraphSpec hg = sample_hypergraph(n, k, p, rng);
    t.expect(has_perfect_matching(hg) == oracles::hyper_matching(hg),
             "hypergraph-matching mismatch on instance " + std::to_string(i));
  }
}

// ---- 12: dual-family identities ----
void duality(Outcome& t) {
  for (int i = 0; i < 100; ++i) {
    const MonotoneFamily& f = corpus()[i];
    for (double p : nine_ps()) {
      DualityResiduals r = duality_identities(f, p);
      t.expect(r.mu_residual <= 1e-9,
               "measure residual " + fmt(r.mu_residual) + " on family " +
                   std::to_string(i) + " at p=" + fmt(p));
      t.expect(r.influence_residual <= 1e-9,
               "influence residual " + fmt(r.influence_residual) +
                   " on family " + std::to_string(i) + " at p=" + fmt(p));
    }
  }
}

struct Criterion {
  const char* name;
  double time_limit;  // seconds
  Body body;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"subcube families sit exactly on the isoperimetric bound", 1.0,
       subcube_equality},
      {"isoperimetric gap is nonnegative across the corpus", 30.0,
       gap_nonnegative},
      {"measure derivative equals total influence across the corpus", 30.0,
       derivative_is_influence},
      {"two-point entropy inequality holds on the grid", 1.0, entropy_lemma},
      {"near-critical witness search succeeds on every corpus family", 60.0,
       sweep_always_succeeds},
      {"cover threshold below critical p; cover DP matches the oracle", 120.0,
       cover_vs_critical},
      {"closed-form anchor constants", 120.0, anchors},
      {"block-family closed forms match exact enumeration", 10.0,
       block_closed_forms},
      {"graph cover threshold at least half the first-moment threshold", 60.0,
       graph_cover_vs_first_moment},
      {"Monte Carlo brackets contain the exact critical probability", 300.0,
       mc_brackets},
      {"subset-DP checkers agree with exhaustive search", 120.0,
       checkers_vs_exhaustive},
      {"dual-family measure and influence identities", 30.0, duality},
  };

  int failed = 0;
  int id = 0;
  for (const Criterion& c : criteria) {
    ++id;
    Outcome t;
    double start = now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.expect(false, std::string("unexpected exception: ") + e.what());
    }
    double elapsed = now() - start;
    t.expect(elapsed < c.time_limit,
             "took " + fmt(elapsed) + "s, limit " + fmt(c.time_limit) + "s");
    bool ok = t.failures == 0;
    if (!ok) ++failed;
    std::printf("[%2d/12] %s  %s  (%ld checks, %.2fs)\n", id,
                ok ? "PASS" : "FAIL", c.name, t.checks, elapsed);
    if (!ok)
      std::printf("        %ld failed; first: %s\n", t.failures,
                  t.first_failure.c_str());
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed;
}
