#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thresholds/generators.hpp"
#include "thresholds/json_io.hpp"
#include "thresholds/measure.hpp"

using namespace thresholds;

namespace {

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string csv_row(const AnalysisReport& r) {
  return fmt12(r.p) + "," + fmt12(r.m) + "," + fmt12(r.m_prime) + "," +
         fmt12(r.influence) + "," + fmt12(r.iso_gap) + "," + fmt12(r.ratio);
}

json report_to_json(const AnalysisReport& r) {
  json j;
  j["p"] = r.p;
  j["m"] = r.m;
  j["dm_dp"] = r.m_prime;
  j["influence"] = r.influence;
  j["iso_gap"] = r.iso_gap;
  j["optimality_ratio"] = r.ratio;
  return j;
}

std::string stem_of(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

Mask parse_element_list(const std::string& text, int n) {
  std::vector<int> elems;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) {
        try {
          elems.push_back(std::stoi(cur));
        } catch (const std::exception&) {
          throw ValidationError("cannot parse element '" + cur + "'");
        }
        cur.clear();
      }
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (elems.empty()) throw ValidationError("empty element list");
  return elements_to_mask(elems, n);
}

struct GlobalFlags {
  double tol = 1e-9;
  int cap = kDefaultEnumCap;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  double eps = 0.5;
  bool as_json = false;
  bool as_csv = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "thresholds: exact and Monte Carlo threshold analysis of monotone set "
      "families"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--tol", g.tol, "numeric tolerance for bisections");
  app.add_option("--cap", g.cap,
                 "enumeration cap (ground-set size for exact analysis, "
                 "minimal-set count for covers)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--trials", g.trials,
                 "Monte Carlo trials (per probe in pc mode)");
  app.add_option("--eps", g.eps, "sweep exponent in (0, 1]");
  auto* jflag = app.add_flag("--json", g.as_json, "JSON output");
  app.add_flag("--csv", g.as_csv, "CSV output")->excludes(jflag);

  std::function<int()> action;

  // ---- analyze ----
  {
    auto* cmd = app.add_subcommand("analyze",
                                   "evaluate measure, derivative, influence "
                                   "and isoperimetric quantities at given p");
    auto file = std::make_shared<std::string>();
    auto ps = std::make_shared<std::vector<double>>();
    auto pmin = std::make_shared<double>(0.05);
    auto pmax = std::make_shared<double>(0.95);
    auto steps = std::make_shared<int>(19);
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->add_option("--p", *ps, "probability (repeatable)");
    cmd->add_option("--pmin", *pmin, "grid start");
    cmd->add_option("--pmax", *pmax, "grid end");
    cmd->add_option("--steps", *steps, "grid size");
    cmd->callback([&, file, ps, pmin, pmax, steps] {
      action = [&, file, ps, pmin, pmax, steps]() {
        MonotoneFamily fam = load_family(*file);
        ExactAnalyzer analyzer(fam, g.cap);
        std::vector<double> grid = *ps;
        if (grid.empty()) {
          if (*steps < 1) throw BadParameterError("need at least one step");
          for (int i = 0; i < *steps; ++i)
            grid.push_back(*steps == 1
                               ? *pmin
                               : *pmin + (*pmax - *pmin) * i / (*steps - 1));
        }
        std::vector<AnalysisReport> rows;
        for (double p : grid) rows.push_back(analyzer.report(p));
        if (g.as_json) {
          json out = json::array();
          for (const auto& r : rows) out.push_back(report_to_json(r));
          print_json(out);
        } else {
          std::cout << kSweepCsvHeader << "\n";
          for (const auto& r : rows) std::cout << csv_row(r) << "\n";
        }
        return 0;
      };
    });
  }

  // ---- pc ----
  {
    auto* cmd = app.add_subcommand(
        "pc", "critical probability (measure = 1/2) of a family");
    auto file = std::make_shared<std::string>();
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->callback([&, file] {
      action = [&, file]() {
        MonotoneFamily fam = load_family(*file);
        ExactAnalyzer analyzer(fam, g.cap);
        json out;
        out["n"] = fam.n();
        out["p_c"] = analyzer.critical_probability(g.tol);
        out["tol"] = g.tol;
        print_json(out);
        return 0;
      };
    });
  }

  // ---- q ----
  {
    auto* cmd = app.add_subcommand(
        "q", "cover threshold: largest q with a cover of cost < 1/2");
    auto file = std::make_shared<std::string>();
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->callback([&, file] {
      action = [&, file]() {
        MonotoneFamily fam = load_family(*file);
        QThreshold qt = q_threshold(fam, g.tol, g.cap);
        print_json(witness_to_json(qt.witness));
        return 0;
      };
    });
  }

  // ---- qstar ----
  {
    auto* cmd = app.add_subcommand(
        "qstar", "cover threshold restricted to automorphism-invariant covers");
    auto file = std::make_shared<std::string>();
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->callback([&, file] {
      action = [&, file]() {
        MonotoneFamily fam = load_family(*file);
        AutomorphismGroup group = automorphisms(fam);
        QThreshold qt = q_star(fam, g.tol, g.cap, &group);
        json out = witness_to_json(qt.witness);
        out["group_order"] = group.elements.size();
        print_json(out);
        return 0;
      };
    });
  }

  // ---- audit ----
  {
    auto* cmd = app.add_subcommand(
        "audit", "side-by-side p_c vs cover threshold gap report");
    auto file = std::make_shared<std::string>();
    auto id = std::make_shared<std::string>();
    auto no_qstar = std::make_shared<bool>(false);
    auto kgap = std::make_shared<double>(1.0);
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->add_option("--id", *id, "row label (default: file stem)");
    cmd->add_option("--kgap", *kgap, "constant K for the margin report");
    cmd->add_flag("--no-qstar", *no_qstar, "skip the symmetric threshold");
    cmd->callback([&, file, id, no_qstar, kgap] {
      action = [&, file, id, no_qstar, kgap]() {
        MonotoneFamily fam = load_family(*file);
        ExactAnalyzer analyzer(fam, std::max(g.cap, kDefaultEnumCap));
        double pc = analyzer.critical_probability(g.tol);
        QThreshold qt = q_threshold(fam, g.tol, std::max(g.cap, kDefaultCoverCap));
        json out;
        out["id"] = id->empty() ? stem_of(*file) : *id;
        out["n"] = fam.n();
        out["p_c"] = pc;
        out["q"] = qt.q;
        if (!*no_qstar) {
          try {
            QThreshold qs = q_star(fam, g.tol, std::max(g.cap, kDefaultCoverCap));
            out["q_star"] = qs.q;
          } catch (const CapError&) {
            // q* is optional in the row; out of cap just omits it.
          }
        }
        double ratio = pc / qt.q;
        out["ratio"] = ratio;
        // The gap normalization's log base is ambiguous in general usage, so
        // both are reported; "_ln" uses the natural log.
        if (fam.n() >= 2) {
          out["normalized_gap_ln"] = pc / (qt.q * std::log(double(fam.n())));
          out["normalized_gap_log2"] = pc / (qt.q * std::log2(double(fam.n())));
          out["k_gap"] = *kgap;
          bool exceeds = ratio > *kgap * std::log(double(fam.n()));
          out["exceeds_k_ln_n"] = exceeds;
          if (exceeds)
            out["note"] =
                "ratio exceeds K ln n: worth a close look, not an error";
        }
        print_json(out);
        return 0;
      };
    });
  }

  // ---- graph ----
  {
    auto* cmd = app.add_subcommand("graph", "graph-property reports");
    cmd->require_subcommand(1);
    cmd->fallthrough();

    auto file = std::make_shared<std::string>();
    auto host = std::make_shared<int>(0);

    auto* pe = cmd->add_subcommand(
        "pe", "first-moment (expected-copy-count) threshold");
    pe->add_option("--graph", *file, "graph JSON file")->required();
    pe->callback([&, file] {
      action = [&, file]() {
        GraphSpec h = load_graph(*file);
        auto rep = expectation_threshold(h);
        json out;
        out["p_e"] = rep.p_e;
        json binding;
        json edges = json::array();
        for (std::uint32_t s = rep.binding.edge_subset; s;) {
          int e = std::countr_zero(s);
          s &= s - 1;
          edges.push_back(json::array(
              {h.edges[e].first, h.edges[e].second}));
        }
        binding["edges"] = std::move(edges);
        binding["copies"] = rep.binding.copies;
        binding["edge_count"] = rep.binding.edge_count;
        out["binding"] = std::move(binding);
        out["constraints"] = rep.constraints.size();
        print_json(out);
        return 0;
      };
    });

    auto* den = cmd->add_subcommand("density", "densest-subgraph ratio");
    den->add_option("--graph", *file, "graph JSON file")->required();
    den->callback([&, file] {
      action = [&, file]() {
        GraphSpec h = load_graph(*file);
        auto rep = max_density(h);
        json out;
        out["density_num"] = rep.num;
        out["density_den"] = rep.den;
        out["density"] = double(rep.num) / double(rep.den);
        out["exponent"] = rep.exponent;
        out["witness"] = rep.witness;
        print_json(out);
        return 0;
      };
    });

    auto* famc = cmd->add_subcommand(
        "family", "containment family of the pattern on an n-vertex host");
    famc->add_option("--graph", *file, "graph JSON file")->required();
    famc->add_option("--n", *host, "host vertex count")->required();
    famc->callback([&, file, host] {
      action = [&, file, host]() {
        GraphSpec h = load_graph(*file);
        print_json(family_to_json(containment_family(h, *host)));
        return 0;
      };
    });

    auto* qg = cmd->add_subcommand(
        "q", "cover threshold of the containment family");
    qg->add_option("--graph", *file, "graph JSON file")->required();
    qg->add_option("--n", *host, "host vertex count")->required();
    qg->callback([&, file, host] {
      action = [&, file, host]() {
        GraphSpec h = load_graph(*file);
        auto rep = q_of_graph(h, *host, g.tol);
        json out;
        out["n"] = rep.n;
        out["q"] = rep.q;
        out["p_e_padded"] = rep.p_e_padded;
        if (std::isfinite(rep.p_e_padded) && rep.p_e_padded > 0)
          out["ratio_q_over_half_pe"] = rep.q / (0.5 * rep.p_e_padded);
        out["witness"] = witness_to_json(rep.witness);
        print_json(out);
        return 0;
      };
    });
  }

  // ---- mc ----
  {
    auto* cmd = app.add_subcommand(
        "mc", "Monte Carlo estimation for graph/hypergraph properties");
    auto property = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("mu");
    auto pattern_file = std::make_shared<std::string>();
    auto n = std::make_shared<int>(0);
    auto k = std::make_shared<int>(0);
    auto p = std::make_shared<double>(0.5);
    auto confidence = std::make_shared<double>(0.95);
    auto mc_tol = std::make_shared<double>(0.01);
    cmd->add_option("--property", *property,
                    "subgraph | hamilton | trianglefactor | hypermatching")
        ->required();
    cmd->add_option("--mode", *mode, "mu (estimate at p) or pc (bisection)");
    cmd->add_option("--pattern", *pattern_file,
                    "graph JSON file (subgraph property)");
    cmd->add_option("--n", *n, "host size")->required();
    cmd->add_option("--k", *k, "hypergraph edge size");
    cmd->add_option("--p", *p, "edge probability (mu mode)");
    cmd->add_option("--confidence", *confidence, "probe confidence (pc mode)");
    cmd->add_option("--mc-tol", *mc_tol, "bracket width target (pc mode)");
    cmd->callback([&, property, mode, pattern_file, n, k, p, confidence,
                   mc_tol] {
      action = [&, property, mode, pattern_file, n, k, p, confidence,
                mc_tol]() {
        PropertySpec prop;
        if (*property == "subgraph") {
          if (pattern_file->empty())
            throw ValidationError("subgraph property needs --pattern");
          prop = PropertySpec::subgraph(*n, load_graph(*pattern_file));
        } else if (*property == "hamilton") {
          prop = PropertySpec::hamilton(*n);
        } else if (*property == "trianglefactor") {
          prop = PropertySpec::triangle_factor(*n);
        } else if (*property == "hypermatching") {
          prop = PropertySpec::hyper_matching(*n, *k);
        } else {
          throw ValidationError("unknown property '" + *property + "'");
        }
        json out;
        out["property"] = *property;
        out["n"] = *n;
        if (prop.kind == PropertySpec::Kind::kHyperMatching) out["k"] = *k;
        out["seed"] = g.seed;
        if (*mode == "mu") {
          MCEstimate est = estimate_mu(prop, *p, g.trials, g.seed);
          out["mode"] = "mu";
          out["p"] = est.p;
          out["trials"] = est.trials;
          out["successes"] = est.successes;
          out["estimate"] = est.estimate;
          out["ci_low"] = est.ci_low;
          out["ci_high"] = est.ci_high;
          out["confidence"] = 0.95;
          print_json(out);
          return 0;
        }
        if (*mode != "pc")
          throw ValidationError("mode must be mu or pc");
        EmpiricalPc res = empirical_critical_p(prop, *mc_tol, *confidence,
                                               g.seed, g.trials);
        out["mode"] = "pc";
        out["tol"] = *mc_tol;
        out["confidence"] = *confidence;
        out["lo"] = res.lo;
        out["hi"] = res.hi;
        out["p_hat"] = res.p_hat;
        out["conclusive"] = res.conclusive;
        json probes = json::array();
        for (const auto& pr : res.probes) {
          json jp;
          jp["p"] = pr.p;
          jp["trials"] = pr.trials;
          jp["successes"] = pr.successes;
          jp["ci_low"] = pr.ci_low;
          jp["ci_high"] = pr.ci_high;
          jp["verdict"] = pr.verdict;
          probes.push_back(std::move(jp));
        }
        out["probes"] = std::move(probes);
        print_json(out);
        return res.conclusive ? 0 : 4;
      };
    });
  }

  // ---- sweep ----
  {
    auto* cmd = app.add_subcommand(
        "sweep",
        "scan [n^-eps * p_c, p_c]: optimality-ratio witness + CSV grid");
    auto file = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option("--family", *file, "family JSON file")->required();
    cmd->add_option("--out", *out_path, "also write the CSV grid here");
    cmd->callback([&, file, out_path] {
      action = [&, file, out_path]() {
        MonotoneFamily fam = load_family(*file);
        ExactAnalyzer analyzer(fam, g.cap);
        OptimalPResult witness = optimal_p_sweep(analyzer, g.eps);
        double pc = analyzer.critical_probability(1e-12);
        double lo = std::pow(double(fam.n()), -g.eps) * pc;

        const int kCsvPoints = 100;
        std::vector<AnalysisReport> rows;
        for (int i = 0; i < kCsvPoints; ++i) {
          double t = double(i) / (kCsvPoints - 1);
          rows.push_back(analyzer.report(lo * std::pow(pc / lo, t)));
        }

        auto write_csv = [&rows](std::ostream& os) {
          os << kSweepCsvHeader << "\n";
          for (const auto& r : rows) os << csv_row(r) << "\n";
        };
        if (!out_path->empty()) {
          std::ofstream os(*out_path);
          if (!os) throw ValidationError("cannot write " + *out_path);
          write_csv(os);
        }
        if (g.as_csv) {
          write_csv(std::cout);
          return 0;
        }

        json out;
        out["n"] = fam.n();
        out["eps"] = g.eps;
        out["p_c"] = pc;
        out["p_lo"] = lo;
        out["witness_p"] = witness.p;
        out["witness_ratio"] = witness.ratio;
        out["witness_bound"] = witness.bound;
        out["c_used"] = witness.c_used;
        if (!out_path->empty()) out["csv"] = *out_path;

        // Secondary scan of [eps * p_c / log2 n, p_c] for the smallest
        // ratio: reported only, nothing asserted.
        if (fam.n() >= 2) {
          double lo2 = g.eps * pc / std::log2(double(fam.n()));
          lo2 = std::min(lo2, pc);
          double best_ratio = std::numeric_limits<double>::infinity();
          double best_p = pc;
          for (int i = 0; i < 1000; ++i) {
            double t = double(i) / 999.0;
            double p = lo2 * std::pow(pc / lo2, t);
            try {
              double r = analyzer.optimality_ratio(p);
              if (r < best_ratio) {
                best_ratio = r;
                best_p = p;
              }
            } catch (const DegenerateMeasureError&) {
            }
          }
          json scan;
          scan["p_lo"] = lo2;
          scan["p_hi"] = pc;
          scan["min_ratio"] = best_ratio;
          scan["p_at_min"] = best_p;
          scan["constant_witness_exists"] = best_ratio <= witness.c_used;
          scan["compared_against"] = witness.c_used;
          out["constant_scan"] = std::move(scan);
        }
        print_json(out);
        return 0;
      };
    });
  }

  // ---- gen ----
  {
    auto* cmd = app.add_subcommand("gen", "generate a named family as JSON");
    auto type = std::make_shared<std::string>();
    auto n = std::make_shared<int>(0);
    auto k = std::make_shared<int>(1);
    auto count = std::make_shared<int>(4);
    auto set_text = std::make_shared<std::string>();
    auto size_bias = std::make_shared<double>(0.4);
    cmd->add_option("--type", *type,
                    "subcube | dualtribes | majority | random | hypermatching")
        ->required();
    cmd->add_option("--n", *n, "ground-set / vertex count")->required();
    cmd->add_option("--k", *k, "block / edge size");
    cmd->add_option("--count", *count, "target set count (random)");
    cmd->add_option("--set", *set_text, "comma-separated elements (subcube)");
    cmd->add_option("--size-bias", *size_bias,
                    "per-coordinate inclusion rate (random)");
    cmd->callback([&, type, n, k, count, set_text, size_bias] {
      action = [&, type, n, k, count, set_text, size_bias]() {
        MonotoneFamily fam = [&]() {
          if (*type == "subcube") {
            if (set_text->empty())
              throw ValidationError("subcube needs --set");
            return subcube(*n, parse_element_list(*set_text, *n));
          }
          if (*type == "dualtribes") return dual_tribes(TribesParams(*n, *k));
          if (*type == "majority") return majority(*n);
          if (*type == "random") {
            RandomFamilyOptions opts;
            opts.size_bias = *size_bias;
            return random_monotone(*n, *count, g.seed, opts);
          }
          if (*type == "hypermatching")
            return hypergraph_matching_family(*n, *k);
          throw ValidationError("unknown family type '" + *type + "'");
        }();
        print_json(family_to_json(fam));
        return 0;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
