#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thresholds/generators.hpp"
#include "thresholds/measure.hpp"

using namespace thresholds;
using doctest::Approx;

namespace {

Mask mk(std::initializer_list<int> elems) {
  Mask m = 0;
  for (int e : elems) m |= bit(e);
  return m;
}

const double kPGrid[] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("subcube measure is p^r") {
  for (int n : {3, 6, 10})
    for (int r = 1; r <= 3; ++r) {
      ExactAnalyzer a(subcube(n, full_mask(r)));
      for (double p : kPGrid) {
        CHECK(a.mu(p) == Approx(std::pow(p, r)).epsilon(1e-13));
        CHECK(a.mu_derivative(p) ==
              Approx(r * std::pow(p, r - 1)).epsilon(1e-12));
      }
    }
}

TEST_CASE("majority-3 closed form") {
  ExactAnalyzer a(majority(3));
  CHECK(a.mu(0.5) == Approx(0.5).epsilon(1e-15));
  for (double p : kPGrid)
    CHECK(a.mu(p) == Approx(3 * p * p - 2 * p * p * p).epsilon(1e-13));
  auto inf = a.influence(0.5);
  CHECK(inf.total == Approx(1.5).epsilon(1e-13));
  for (double x : inf.per_coordinate) CHECK(x == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("mixed-size antichain at one half") {
  // minimal sets {0} and {1,2}: mu(1/2) = 1/2 + 1/2 * 1/4 = 0.625
  auto f = MonotoneFamily::from_sets(3, {mk({0}), mk({1, 2})});
  CHECK(mu(f, 0.5) == Approx(0.625).epsilon(1e-15));
}

TEST_CASE("measure endpoints") {
  auto f = majority(5);
  ExactAnalyzer a(f);
  CHECK(a.mu(0.0) == 0.0);
  CHECK(a.mu(1.0) == 1.0);
  CHECK_THROWS_AS(a.mu(-0.1), DomainError);
  CHECK_THROWS_AS(a.mu(1.1), DomainError);
}

TEST_CASE("measure agrees with direct enumeration") {
  for (int i = 0; i < 25; ++i) {
    int n = 3 + i % 8;
    auto f = random_monotone(n, 2 + i % 6, 3100 + i);
    ExactAnalyzer a(f);
    for (double p : kPGrid)
      CHECK(a.mu(p) == Approx(oracles::mu(f, p)).epsilon(1e-12));
  }
}

TEST_CASE("measure agrees with the 50-digit path") {
  for (int i = 0; i < 10; ++i) {
    int n = 4 + i % 6;
    auto f = random_monotone(n, 3 + i % 4, 5150 + i);
    for (double p : {0.01, 0.3, 0.77, 0.999})
      CHECK(mu(f, p) == Approx(mu_highprec(f, p)).epsilon(1e-13));
  }
}

TEST_CASE("derivative matches a central difference") {
  for (int i = 0; i < 10; ++i) {
    auto f = random_monotone(3 + i % 6, 2 + i % 4, 880 + i);
    ExactAnalyzer a(f);
    for (double p : {0.2, 0.5, 0.8}) {
      double h = 1e-6;
      double fd = (oracles::mu(f, p + h) - oracles::mu(f, p - h)) / (2 * h);
      CHECK(a.mu_derivative(p) == Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("influence agrees with the pivotal-pair enumeration") {
  for (int i = 0; i < 20; ++i) {
    int n = 3 + i % 7;
    auto f = random_monotone(n, 2 + i % 5, 6000 + i);
    ExactAnalyzer a(f);
    for (double p : {0.25, 0.5, 0.75}) {
      auto got = a.influence(p);
      auto want = oracles::influence(f, p);
      for (int j = 0; j < n; ++j)
        CHECK(got.per_coordinate[j] == Approx(want[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("dictator influence is concentrated") {
  ExactAnalyzer a(subcube(5, mk({2})));
  auto inf = a.influence(0.37);
  for (int j = 0; j < 5; ++j)
    CHECK(inf.per_coordinate[j] == Approx(j == 2 ? 1.0 : 0.0).epsilon(1e-15));
}

TEST_CASE("derivative equals total influence") {
  for (int i = 0; i < 30; ++i) {
    auto f = random_monotone(3 + i % 8, 2 + i % 7, 1234 + i);
    ExactAnalyzer a(f);
    for (double p : kPGrid) CHECK(russo_residual(a, p) < 1e-10);
  }
}

TEST_CASE("critical probability of named families") {
  CHECK(critical_probability(majority(3), 1e-10) == Approx(0.5).epsilon(1e-9));
  CHECK(critical_probability(majority(5), 1e-10) == Approx(0.5).epsilon(1e-9));
  for (int r = 1; r <= 4; ++r)
    CHECK(critical_probability(subcube(6, full_mask(r)), 1e-10) ==
          Approx(std::pow(2.0, -1.0 / r)).epsilon(1e-9));
  // frozen regression value for the two-block transversal family
  CHECK(critical_probability(dual_tribes(TribesParams(4, 2)), 1e-11) ==
        Approx(0.4588038998538031).epsilon(1e-9));
}

TEST_CASE("critical probability brackets one half") {
  for (int i = 0; i < 20; ++i) {
    auto f = random_monotone(3 + i % 8, 2 + i % 6, 77 + i);
    ExactAnalyzer a(f);
    double pc = a.critical_probability(1e-10);
    CHECK(a.mu(pc) == Approx(0.5).epsilon(1e-8));
  }
}

TEST_CASE("subcubes sit exactly on the isoperimetric equality") {
  for (int n : {3, 5, 8})
    for (int r = 1; r <= 3; ++r) {
      ExactAnalyzer a(subcube(n, full_mask(r)));
      for (double p : kPGrid) {
        CHECK(std::fabs(a.iso_gap(p)) < 1e-12);
        CHECK(std::fabs(a.optimality_ratio(p) - 1.0) < 1e-12);
      }
    }
}

TEST_CASE("isoperimetric gap is nonnegative") {
  for (int i = 0; i < 40; ++i) {
    auto f = random_monotone(3 + i % 8, 2 + i % 7, 24000 + i);
    ExactAnalyzer a(f);
    for (double p : kPGrid) {
      CHECK(a.iso_gap(p) > -1e-9);
      CHECK(a.optimality_ratio(p) > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("gap quantities reject boundary and degenerate inputs") {
  ExactAnalyzer a(subcube(4, mk({0})));
  CHECK_THROWS_AS(a.iso_gap(0.0), DomainError);
  CHECK_THROWS_AS(a.iso_gap(1.0), DomainError);
  ExactAnalyzer tiny(subcube(20, full_mask(20)));
  // mu = 0.1^20 is below the degeneracy floor
  CHECK_THROWS_AS(tiny.iso_gap(0.1), DegenerateMeasureError);
  CHECK_THROWS_AS(tiny.optimality_ratio(0.1), DegenerateMeasureError);
}

TEST_CASE("report rows carry NaN for degenerate points") {
  ExactAnalyzer a(majority(3));
  auto row = a.report(0.5);
  CHECK(row.m == Approx(0.5));
  CHECK(row.m_prime == Approx(1.5));
  CHECK(row.influence == Approx(1.5));
  CHECK(row.iso_gap == Approx(0.25));
  CHECK(row.ratio == Approx(1.5));
  auto end = a.report(0.0);
  CHECK(end.m == 0.0);
  CHECK(std::isnan(end.iso_gap));
  CHECK(std::isnan(end.ratio));
}

TEST_CASE("sweep finds a witness for the dictator at p_c") {
  ExactAnalyzer a(subcube(3, mk({0})));
  auto res = optimal_p_sweep(a, 0.5);
  CHECK(res.p == Approx(0.5).epsilon(1e-9));
  CHECK(res.ratio <= res.bound);
}

TEST_CASE("sweep succeeds on assorted families and exponents") {
  for (int i = 0; i < 15; ++i) {
    auto f = random_monotone(3 + i % 8, 2 + i % 6, 9100 + i);
    ExactAnalyzer a(f);
    for (double eps : {0.25, 0.5, 1.0}) {
      auto res = optimal_p_sweep(a, eps);
      CHECK(res.ratio <= res.bound + 1e-12);
      double pc = a.critical_probability(1e-12);
      CHECK(res.p <= pc * 1.0000001);
      CHECK(res.p >= std::pow(double(f.n()), -eps) * pc * 0.9999999);
    }
  }
  CHECK_THROWS_AS(optimal_p_sweep(ExactAnalyzer(majority(3)), 0.0),
                  BadParameterError);
  CHECK_THROWS_AS(optimal_p_sweep(ExactAnalyzer(majority(3)), 1.5),
                  BadParameterError);
}

TEST_CASE("conditional measure on fixed coordinates") {
  auto f = majority(3);
  // given 0 present: need one of {1,2}; given 0 absent: need both
  CHECK(conditional_mu(f, 0.5, mk({0}), ConditionMode::kContains) ==
        Approx(0.75).epsilon(1e-13));
  CHECK(conditional_mu(f, 0.5, mk({0}), ConditionMode::kAvoids) ==
        Approx(0.25).epsilon(1e-13));
  // empty conditioning set reduces to the plain measure
  for (double p : {0.3, 0.6})
    CHECK(conditional_mu(f, p, 0, ConditionMode::kContains) ==
          Approx(mu(f, p)).epsilon(1e-13));
  CHECK_THROWS_AS(conditional_mu(f, 0.5, mk({0}) | bit(3),
                                 ConditionMode::kContains),
                  ValidationError);
}

TEST_CASE("conditional measures average back to the measure") {
  for (int i = 0; i < 10; ++i) {
    auto f = random_monotone(4 + i % 5, 2 + i % 4, 31337 + i);
    Mask r = mk({0, 1});
    for (double p : {0.2, 0.5, 0.8}) {
      double total = 0;
      // sum over the four fixings of coordinates 0 and 1
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1) {
          Mask fixed = (b0 ? bit(0) : 0) | (b1 ? bit(1) : 0);
          double w = (b0 ? p : 1 - p) * (b1 ? p : 1 - p);
          // measure conditioned on exactly this fixing
          auto g = f;
          double chunk;
          if (fixed == r)
            chunk = conditional_mu(g, p, r, ConditionMode::kContains);
          else if (fixed == 0)
            chunk = conditional_mu(g, p, r, ConditionMode::kAvoids);
          else {
            // one in, one out: enumerate by hand via the oracle
            double sum = 0;
            int n = f.n();
            for (Mask s = 0; s < (Mask{1} << n); ++s) {
              if ((s & r) != fixed) continue;
              if (!f.contains(s)) continue;
              double ww = 1;
              for (int j = 2; j < n; ++j)
                ww *= (s >> j) & 1 ? p : 1 - p;
              sum += ww;
            }
            chunk = sum;
          }
          total += w * chunk;
        }
      CHECK(total == Approx(oracles::mu(f, p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("duality identities hold exactly") {
  std::vector<MonotoneFamily> fams = {majority(3), majority(5),
                                      subcube(5, mk({1, 3})),
                                      dual_tribes(TribesParams(6, 2))};
  for (int i = 0; i < 15; ++i)
    fams.push_back(random_monotone(3 + i % 7, 2 + i % 5, 60 + i));
  for (const auto& f : fams)
    for (double p : {0.2, 0.5, 0.7}) {
      auto res = duality_identities(f, p);
      CHECK(res.mu_residual < 1e-12);
      CHECK(res.influence_residual < 1e-12);
    }
}

TEST_CASE("two-point entropy inequality") {
  CHECK(iso_lemma_gap(0.2, 0.8, 0.5) ==
        Approx(0.1609640474436812).epsilon(1e-12));
  for (double x : {0.04, 0.3, 0.62, 1.0})
    for (double p : kPGrid) CHECK(std::fabs(iso_lemma_gap(x, x, p)) < 1e-12);
  for (double a = 0.05; a <= 1.0; a += 0.05)
    for (double b = a; b <= 1.0; b += 0.05)
      for (double p : {0.1, 0.5, 0.9})
        CHECK(iso_lemma_gap(a, b, p) > -1e-12);
  CHECK_THROWS_AS(iso_lemma_gap(0.5, 0.4, 0.5), DomainError);
  CHECK_THROWS_AS(iso_lemma_gap(0.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(iso_lemma_gap(0.2, 0.8, 1.0), DomainError);
}

TEST_CASE("boundary pairs bound the measure") {
  // p * I <= n * m for monotone families: every member has at most n
  // pivotal coordinates.
  for (int i = 0; i < 15; ++i) {
    auto f = random_monotone(3 + i % 8, 2 + i % 6, 451 + i);
    ExactAnalyzer a(f);
    for (double p : {0.2, 0.5, 0.8})
      CHECK(p * a.influence(p).total <= f.n() * a.mu(p) + 1e-12);
  }
}
