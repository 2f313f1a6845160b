#pragma once
// Command line front end, header-only so tests can call run() in process
// and compare captured output byte for byte.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/bell.hpp"
#include "qnet/bounds.hpp"
#include "qnet/dense.hpp"
#include "qnet/multigraph.hpp"
#include "qnet/rng.hpp"
#include "qnet/standard_form.hpp"
#include "qnet/triangle_protocols.hpp"
#include "qnet/uncertainty.hpp"

namespace qnet::cli {

inline std::string fmt(double x, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

// Round through the printed form so JSON and CSV agree at a given precision.
inline double rounded(double x, int precision = 6) {
  return std::strtod(fmt(x, precision).c_str(), nullptr);
}

namespace detail {

// Bad flag combinations detected after parsing; reported like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string slurp(const std::string& path, std::istream& in_stream) {
  std::stringstream ss;
  if (path == "-") {
    ss << in_stream.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

inline Multigraph load_graph(const std::string& path, std::istream& in_stream) {
  return graph_from_json_text(slurp(path, in_stream));
}

// Accepts either a pure state ("amps") or a density operator ("matrix").
inline DenseOperator load_density(const std::string& path, std::istream& in_stream) {
  nlohmann::json j = nlohmann::json::parse(slurp(path, in_stream));
  if (j.contains("matrix")) return operator_from_json(j);
  return projector_onto(state_from_json(j));
}

inline void write_operator_file(const std::string& path, const DenseOperator& rho) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write file: " + path);
  f << operator_to_json(rho).dump() << "\n";
}

inline nlohmann::json moves_to_json(const std::vector<LcMove>& moves) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : moves) arr.push_back({{"vertex", m.vertex + 1}, {"weight", m.weight}});
  return arr;
}

inline nlohmann::json doubles_to_json(const std::vector<double>& v, int precision) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : v) arr.push_back(rounded(x, precision));
  return arr;
}

inline nlohmann::json coefficients_to_json(const SourceCoefficients& c, int precision) {
  return {{"alpha", doubles_to_json(c.alpha, precision)},
          {"beta", doubles_to_json(c.beta, precision)},
          {"gamma", doubles_to_json(c.gamma, precision)}};
}

inline nlohmann::json report_to_json(const BoundReport& r, int precision) {
  return {{"d", r.d},
          {"beta", r.beta},
          {"ub1", rounded(r.ub1, precision)},
          {"ub2", rounded(r.ub2, precision)},
          {"improvement", rounded(r.improvement, precision)},
          {"gap_ratio", rounded(r.gap_ratio, precision)}};
}

inline std::vector<i64> first_primes(int count) {
  std::vector<i64> ps;
  for (i64 v = 2; static_cast<int>(ps.size()) < count; ++v)
    if (is_prime(v)) ps.push_back(v);
  return ps;
}

}  // namespace detail

// Exit codes: 0 success, 1 domain errors or a failed check (machine-readable
// {"error": ...} JSON on stderr), 2 usage errors.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"qudit graph states in bipartite source networks"};
  app.require_subcommand(1);

  std::string graph_path;
  bool min_beta = false;
  auto* cmd_std = app.add_subcommand("standardize", "bring a graph to standard form");
  cmd_std->add_option("--graph", graph_path, "graph JSON file, or - for stdin")->required();
  cmd_std->add_flag("--min-beta", min_beta, "scan the whole LC orbit for the smallest index (n <= 6)");

  std::vector<int> pair{1, 2};
  auto* cmd_cls = app.add_subcommand("classify", "classify a graph with a designated vertex pair");
  cmd_cls->add_option("--graph", graph_path, "graph JSON file, or - for stdin")->required();
  cmd_cls->add_option("--pair", pair, "designated vertices, 1-based")->expected(2);

  i64 bounds_d = 0, bounds_beta = 0;
  std::string bounds_graph;
  bool bounds_sweep = false;
  std::vector<i64> d_list, beta_list;
  int bounds_prec = 6;
  auto* cmd_bounds =
      app.add_subcommand("bounds", "fidelity thresholds for bipartite-source network states");
  cmd_bounds->add_option("--d", bounds_d, "prime local dimension");
  cmd_bounds->add_option("--beta", bounds_beta, "odd standard-form index");
  cmd_bounds->add_option("--graph", bounds_graph,
                         "graph JSON file, or - for stdin; bounds for its standard form");
  cmd_bounds->add_flag("--sweep", bounds_sweep, "emit a CSV grid with columns d,beta,ub1,ub2");
  cmd_bounds->add_option("--d-list", d_list, "sweep dimensions (default: first 25 primes)")
      ->delimiter(',');
  cmd_bounds->add_option("--beta-list", beta_list, "sweep indices (default: 1,5)")->delimiter(',');
  cmd_bounds->add_option("--precision", bounds_prec, "significant digits for printed floats");

  std::string which;
  int prot_t = 2, prot_k = 0;
  i64 prot_d = 3;
  int prot_restarts = 64;
  std::uint64_t prot_seed = 1;
  bool prot_sweep = false, prot_uniform = false, prot_free_pairs = false;
  std::vector<i64> prot_shifts{0, 1, 2};
  std::string state_out;
  int prot_prec = 6;
  auto* cmd_prot = app.add_subcommand("protocol", "triangle-network preparation protocols");
  cmd_prot
      ->add_option("--which", which,
                   "p1 (three-qubit target), p2 (qutrit sifting), p3 (rank-k sources), "
                   "variants (best known for a given dimension)")
      ->required()
      ->check(CLI::IsMember({"p1", "p2", "p3", "variants"}));
  cmd_prot->add_option("--t", prot_t, "p1 source rank");
  cmd_prot->add_option("--k", prot_k, "p2 pairs per source / p3 Schmidt rank");
  cmd_prot->add_option("--d", prot_d, "variants target dimension");
  cmd_prot->add_option("--restarts", prot_restarts, "optimizer restarts");
  cmd_prot->add_option("--seed", prot_seed, "optimizer seed");
  cmd_prot->add_flag("--sweep", prot_sweep, "p1: CSV of the optimized fidelity for t = 2..--t");
  cmd_prot->add_flag("--uniform", prot_uniform, "p1: evaluate uniform coefficients, no optimization");
  cmd_prot->add_flag("--free-pairs", prot_free_pairs, "p2: optimize every pair independently");
  cmd_prot->add_option("--shifts", prot_shifts, "p2 node shift assignment, a permutation of 0,1,2")
      ->expected(3)
      ->delimiter(',');
  cmd_prot->add_option("--state-out", state_out, "write the output density operator JSON here");
  cmd_prot->add_option("--precision", prot_prec, "significant digits for printed floats");

  bool bell_table = false;
  std::vector<i64> source_dims{2, 3, 4};
  std::string ineq_name, state_path;
  int bell_restarts = 0;
  std::uint64_t bell_seed = 1;
  int bell_prec = 6;
  auto* cmd_bell =
      app.add_subcommand("bell", "tripartite Bell inequalities and see-saw optimization");
  cmd_bell->add_flag("--table", bell_table,
                     "CSV of see-saw values on optimized triangle states, one column per source rank");
  cmd_bell->add_option("--source-dims", source_dims, "source ranks for the table")->delimiter(',');
  cmd_bell->add_option("--ineq", ineq_name, "inequality name for a single run");
  cmd_bell->add_option("--state", state_path,
                       "three-party state or density operator JSON, or - for stdin");
  cmd_bell->add_option("--restarts", bell_restarts, "see-saw restarts (default: 200 table, 64 single)");
  cmd_bell->add_option("--seed", bell_seed, "see-saw seed");
  cmd_bell->add_option("--precision", bell_prec, "significant digits for printed floats");

  std::uint64_t figur_seed = 1;
  int figur_samples = 1000;
  std::vector<double> figur_lambdas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  int figur_prec = 6;
  auto* cmd_figur = app.add_subcommand(
      "figur-test", "randomized checks of the fine-grained uncertainty relation");
  cmd_figur->add_option("--seed", figur_seed, "sample seed");
  cmd_figur->add_option("--samples", figur_samples, "samples per lambda value");
  cmd_figur->add_option("--lambda-grid", figur_lambdas, "interaction strengths in (0,1)")
      ->delimiter(',');
  cmd_figur->add_option("--precision", figur_prec, "significant digits for printed floats");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_std->parsed()) {
      Multigraph g = detail::load_graph(graph_path, in);
      StandardFormResult res = min_beta ? standardize_min_beta(g) : standardize(g);
      nlohmann::json j{{"beta", res.beta},
                       {"pair", {res.v1 + 1, res.v2 + 1}},
                       {"moves", detail::moves_to_json(res.moves)},
                       {"graph", graph_to_json(res.graph)}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_cls->parsed()) {
      Multigraph g = detail::load_graph(graph_path, in);
      g.check_vertex(pair[0] - 1);
      g.check_vertex(pair[1] - 1);
      GraphClass c = classify(g, pair[0] - 1, pair[1] - 1);
      nlohmann::json j{{"tag", to_string(c.tag)},
                       {"beta", index_beta(g, pair[0] - 1, pair[1] - 1)}};
      if (c.tag == GraphClassTag::g2 || c.tag == GraphClassTag::g3) j["u"] = c.u + 1;
      if (c.tag == GraphClassTag::g3) j["a"] = c.a;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_bounds->parsed()) {
      int modes = (!bounds_graph.empty() ? 1 : 0) + (bounds_sweep ? 1 : 0) +
                  (bounds_d != 0 || bounds_beta != 0 ? 1 : 0);
      if (modes != 1)
        throw detail::UsageError("bounds needs exactly one of --graph, --sweep, or --d with --beta");
      if (bounds_sweep) {
        if (d_list.empty()) d_list = detail::first_primes(25);
        if (beta_list.empty()) beta_list = {1, 5};
        out << "d,beta,ub1,ub2\n";
        for (const BoundReport& r : sweep(d_list, beta_list))
          out << r.d << ',' << r.beta << ',' << fmt(r.ub1, bounds_prec) << ','
              << fmt(r.ub2, bounds_prec) << "\n";
        return 0;
      }
      BoundReport r;
      if (!bounds_graph.empty()) {
        r = bound_for_graph(detail::load_graph(bounds_graph, in));
      } else {
        if (bounds_d == 0 || bounds_beta == 0)
          throw detail::UsageError("bounds needs both --d and --beta");
        r = compare(bounds_d, bounds_beta);
      }
      out << detail::report_to_json(r, bounds_prec).dump(2) << "\n";
      return 0;
    }

    if (cmd_prot->parsed()) {
      if ((prot_sweep || prot_uniform) && which != "p1")
        throw detail::UsageError("--sweep and --uniform apply only to --which p1");
      if ((prot_free_pairs || cmd_prot->count("--shifts") > 0) && which != "p2")
        throw detail::UsageError("--free-pairs and --shifts apply only to --which p2");
      if (prot_sweep) {
        out << "# seed=" << prot_seed << " restarts=" << prot_restarts << "\n";
        out << "t,fidelity\n";
        for (int t = 2; t <= prot_t; ++t)
          out << t << ',' << fmt(protocol1_optimize(t, prot_restarts, prot_seed).fidelity, prot_prec)
              << "\n";
        return 0;
      }
      nlohmann::json j{{"which", which}};
      ProtocolResult res;
      if (which == "p1") {
        if (prot_uniform) {
          if (prot_t < 1) throw std::invalid_argument("protocol 1 needs t >= 1");
          std::vector<double> u(prot_t, 1.0 / std::sqrt(static_cast<double>(prot_t)));
          res.coefficients = SourceCoefficients{u, u, u};
          res.fidelity = protocol1_fidelity(res.coefficients);
          res.rho_out = protocol1_output(res.coefficients);
          res.gme = res.fidelity > 0.5;
          j["uniform"] = true;
        } else {
          res = protocol1_optimize(prot_t, prot_restarts, prot_seed);
          j["seed"] = prot_seed;
          j["restarts"] = prot_restarts;
        }
        j["t"] = prot_t;
      } else if (which == "p2") {
        int k = prot_k == 0 ? 1 : prot_k;
        std::array<i64, 3> shifts{prot_shifts[0], prot_shifts[1], prot_shifts[2]};
        std::array<i64, 3> sorted = shifts;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != std::array<i64, 3>{0, 1, 2})
          throw std::invalid_argument("--shifts must be a permutation of 0,1,2");
        res = protocol2_optimize(k, prot_restarts, prot_seed, prot_free_pairs, shifts);
        j["seed"] = prot_seed;
        j["restarts"] = prot_restarts;
        j["k"] = k;
      } else if (which == "p3") {
        int k = prot_k == 0 ? 2 : prot_k;
        DenseState psi = protocol3_state(k);
        res.fidelity = fidelity(psi, ghz_state(static_cast<i64>(k) * k));
        res.gme = res.fidelity > 1.0 / (static_cast<double>(k) * k);
        std::vector<double> u(k, 1.0 / std::sqrt(static_cast<double>(k)));
        res.coefficients = SourceCoefficients{u, u, u};
        if (!state_out.empty()) res.rho_out = projector_onto(psi);
        j["k"] = k;
      } else {
        res = protocol3_variants(prot_d);
        if (res.x >= 0.0) j["x"] = rounded(res.x, prot_prec);
        j["d"] = prot_d;
      }
      j["fidelity"] = rounded(res.fidelity, prot_prec);
      j["gme"] = res.gme;
      j["coefficients"] = detail::coefficients_to_json(res.coefficients, prot_prec);
      if (!state_out.empty()) {
        detail::write_operator_file(state_out, res.rho_out);
        j["state_out"] = state_out;
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_bell->parsed()) {
      if (bell_table && !ineq_name.empty())
        throw detail::UsageError("choose either --table or --ineq, not both");
      if (!bell_table && ineq_name.empty())
        throw detail::UsageError("bell needs --table or --ineq NAME --state FILE");
      if (bell_table) {
        int restarts = bell_restarts == 0 ? 200 : bell_restarts;
        TableReport report = table1_report(source_dims, restarts, bell_seed);
        out << "# seed=" << bell_seed << " restarts=" << restarts << "\n";
        out << "name,C,Q";
        for (i64 d : report.source_dims) out << ",d=" << d;
        out << "\n";
        for (const TableRow& row : report.rows) {
          out << row.name << ',' << fmt(row.classical_bound, bell_prec) << ','
              << fmt(row.quantum_ref, bell_prec);
          for (double v : row.values) out << ',' << fmt(v, bell_prec);
          out << "\n";
        }
        return 0;
      }
      if (state_path.empty()) throw detail::UsageError("bell --ineq needs --state FILE");
      const std::vector<BellInequality> builtins = builtin_inequalities();
      const BellInequality* pick = nullptr;
      for (const BellInequality& b : builtins)
        if (b.name == ineq_name) pick = &b;
      if (pick == nullptr) {
        std::string names;
        for (const BellInequality& b : builtins) names += (names.empty() ? "" : ", ") + b.name;
        throw std::invalid_argument("unknown inequality " + ineq_name + "; available: " + names);
      }
      DenseOperator rho = detail::load_density(state_path, in);
      int restarts = bell_restarts == 0 ? 64 : bell_restarts;
      SeesawResult sr = seesaw(*pick, rho, rho.dims, restarts, bell_seed);
      nlohmann::json j{{"name", pick->name},
                       {"classical_bound", pick->classical_bound},
                       {"quantum_bound", rounded(pick->quantum_bound, bell_prec)},
                       {"seed", bell_seed},
                       {"restarts", restarts},
                       {"value", rounded(sr.value, bell_prec)},
                       {"violation", rounded(sr.value - pick->classical_bound, bell_prec)}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_figur->parsed()) {
      if (figur_samples < 1) throw std::invalid_argument("--samples must be at least 1");
      if (figur_lambdas.empty()) throw std::invalid_argument("--lambda-grid must not be empty");
      Rng rng(figur_seed);
      i64 checks = 0, failures = 0;
      double worst = std::numeric_limits<double>::infinity();
      for (double lambda : figur_lambdas) {
        for (int s = 0; s < figur_samples; ++s) {
          i64 blocks = 1 + static_cast<i64>(rng() % 3);
          i64 c0 = static_cast<i64>(rng() % 3), c1 = static_cast<i64>(rng() % 3);
          ProjectionPair pp = random_projection_pair(rng, lambda, blocks, c0, c1);
          i64 dim = pp.P.mat.rows();
          for (const FigurResult& r : {figur_check(pp, random_density(rng, {dim})),
                                       figur_check(pp, random_state(rng, {dim}))}) {
            ++checks;
            if (!r.holds) ++failures;
            worst = std::min(worst, r.lhs - r.rhs);
          }
        }
      }
      nlohmann::json j{{"seed", figur_seed},
                       {"samples_per_lambda", figur_samples},
                       {"lambda_grid", detail::doubles_to_json(figur_lambdas, figur_prec)},
                       {"checks", checks},
                       {"failures", failures},
                       {"worst_slack", rounded(worst, figur_prec)},
                       {"holds", failures == 0}};
      out << j.dump(2) << "\n";
      return failures == 0 ? 0 : 1;
    }
  } catch (const detail::UsageError& e) {
    err << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qnet::cli
