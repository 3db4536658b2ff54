#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccolap/cco.hpp"
#include "ccolap/cluster.hpp"
#include "ccolap/errors.hpp"
#include "ccolap/experiments.hpp"
#include "ccolap/graph.hpp"
#include "ccolap/io.hpp"
#include "ccolap/jade.hpp"
#include "ccolap/laplacian.hpp"
#include "ccolap/spectral.hpp"

namespace {

using namespace ccolap;

WeightScheme scheme_from(const std::string& s) {
  if (s == "gaussian") return WeightScheme::gaussian;
  if (s == "self_tuning") return WeightScheme::self_tuning;
  if (s == "unit") return WeightScheme::unit;
  throw ValidationError("unknown weight scheme: " + s);
}

PatternMode pattern_from(const std::string& s) {
  if (s == "own") return PatternMode::own;
  if (s == "union" || s == "unite") return PatternMode::unite;
  throw ValidationError("pattern must be own or union");
}

// "-" sends CSV to stdout, anything else to a file
void emit_matrix(const std::string& out, const Eigen::MatrixXd& m) {
  if (out != "-") {
    write_matrix_csv(out, m);
    return;
  }
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) std::cout << ',';
      std::cout << format_double(m(i, j));
    }
    std::cout << '\n';
  }
}

void emit_labels(const std::string& out, const std::vector<int>& labels) {
  if (out != "-") {
    write_labels_csv(out, labels);
    return;
  }
  std::cout << "index,label\n";
  for (size_t i = 0; i < labels.size(); ++i)
    std::cout << i << ',' << labels[i] << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closest commuting graph Laplacians toolkit"};
  app.require_subcommand(1);

  // graph build
  auto* graph_cmd = app.add_subcommand("graph", "graph construction");
  graph_cmd->require_subcommand(1);
  auto* build = graph_cmd->add_subcommand("build", "k-NN graph from points");
  std::string build_points, build_out = "g.json", build_weights = "gaussian";
  int build_k = 4;
  build->add_option("--points", build_points, "points CSV, one row per point")
      ->required();
  build->add_option("--k", build_k, "neighbors per point");
  build->add_option("--weights", build_weights, "gaussian|self_tuning|unit");
  build->add_option("--out", build_out, "output graph JSON");
  build->callback([&] {
    KnnOptions ko;
    ko.k = build_k;
    ko.scheme = scheme_from(build_weights);
    const WeightedGraph g = build_knn_graph(read_points_csv(build_points), ko);
    write_graph_json(build_out, g);
    std::cout << "graph: n=" << g.n << " edges=" << g.edges.size() << " -> "
              << build_out << '\n';
  });

  // cco solve
  auto* cco_cmd = app.add_subcommand("cco", "closest commuting operators");
  cco_cmd->require_subcommand(1);
  auto* solve = cco_cmd->add_subcommand("solve", "penalized descent");
  std::string cco_g1, cco_g2, cco_pattern = "own", cco_out = "result.json";
  double cco_alpha = 1e6;
  solve->add_option("--g1", cco_g1, "first graph JSON")->required();
  solve->add_option("--g2", cco_g2, "second graph JSON")->required();
  solve->add_option("--alpha", cco_alpha, "commutator penalty weight");
  solve->add_option("--pattern", cco_pattern, "own|union");
  solve->add_option("--out", cco_out, "output result JSON");
  solve->callback([&] {
    const CcoProblem p =
        make_problem(read_graph_json(cco_g1), read_graph_json(cco_g2),
                     pattern_from(cco_pattern), cco_alpha);
    const CcoResult r = cco_solve(p);
    write_result_json(cco_out, p, r);
    std::cout << "cco: iterations=" << r.iterations
              << " commutator=" << format_double(r.commutator_frob)
              << " converged=" << (r.converged ? "yes" : "no") << " -> "
              << cco_out << '\n';
  });

  // jade run
  auto* jade_cmd = app.add_subcommand("jade", "joint diagonalization");
  jade_cmd->require_subcommand(1);
  auto* jrun = jade_cmd->add_subcommand("run", "Jacobi sweeps on a pair");
  std::string jade_g1, jade_g2, jade_out = "jb.json";
  jrun->add_option("--g1", jade_g1, "first graph JSON")->required();
  jrun->add_option("--g2", jade_g2, "second graph JSON")->required();
  jrun->add_option("--out", jade_out, "output joint basis JSON");
  jrun->callback([&] {
    const JointBasis jb = jade(laplacian(read_graph_json(jade_g1)).m,
                               laplacian(read_graph_json(jade_g2)).m);
    write_joint_basis_json(jade_out, jb);
    std::cout << "jade: sweeps=" << jb.sweeps
              << " residual=" << format_double(jb.residual) << " -> "
              << jade_out << '\n';
  });

  // spectral ops
  auto* spectral_cmd = app.add_subcommand("spectral", "single-graph operators");
  spectral_cmd->require_subcommand(1);
  std::string sp_graph, sp_out = "-";
  double sp_t = 100.0;
  int sp_m = 100, sp_k = 4;
  std::uint64_t sp_seed = 0;
  const auto add_common = [&](CLI::App* sub, bool needs_t, bool needs_m,
                              bool needs_k) {
    sub->add_option("--graph", sp_graph, "graph JSON")->required();
    sub->add_option("--out", sp_out, "CSV path, - for stdout");
    if (needs_t) sub->add_option("--t", sp_t, "diffusion time");
    if (needs_m) sub->add_option("--m", sp_m, "embedding dimension");
    if (needs_k) {
      sub->add_option("--k", sp_k, "cluster count");
      sub->add_option("--seed", sp_seed, "k-means seed");
    }
  };
  auto* heat = spectral_cmd->add_subcommand("heat", "heat operator entries");
  add_common(heat, true, false, false);
  heat->callback([&] {
    const EigenSystem es = eigendecompose(laplacian(read_graph_json(sp_graph)));
    emit_matrix(sp_out, heat_operator(es, sp_t).h);
  });
  auto* diffdist =
      spectral_cmd->add_subcommand("diffdist", "pairwise diffusion distances");
  add_common(diffdist, true, false, false);
  diffdist->callback([&] {
    const EigenSystem es = eigendecompose(laplacian(read_graph_json(sp_graph)));
    const int n = static_cast<int>(es.lambda.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        d(p, q) = d(q, p) = diffusion_distance(es, sp_t, p, q);
    emit_matrix(sp_out, d);
  });
  auto* emap = spectral_cmd->add_subcommand("eigenmap", "spectral embedding");
  add_common(emap, false, true, false);
  emap->callback([&] {
    const EigenSystem es = eigendecompose(laplacian(read_graph_json(sp_graph)));
    emit_matrix(sp_out, eigenmap(es, sp_m).coords);
  });
  auto* cluster = spectral_cmd->add_subcommand("cluster", "spectral k-means");
  add_common(cluster, false, false, true);
  cluster->callback([&] {
    const EigenSystem es = eigendecompose(laplacian(read_graph_json(sp_graph)));
    emit_labels(sp_out,
                spectral_cluster(eigenmap(es, sp_k), sp_k, sp_seed));
  });

  // experiment driver
  auto* exp_cmd = app.add_subcommand("experiment", "end-to-end studies");
  std::string exp_name, exp_out_dir = "results";
  std::uint64_t exp_seed = 0;
  exp_cmd
      ->add_option("name", exp_name,
                   "circles|ring|swissroll|conjecture|multiview")
      ->required();
  exp_cmd->add_option("--seed", exp_seed, "generator seed");
  exp_cmd->add_option("--out-dir", exp_out_dir, "artifact directory");
  exp_cmd->callback([&] {
    ExperimentConfig cfg;
    cfg.seed = exp_seed;
    cfg.out_dir = exp_out_dir;
    run_experiment(exp_name, cfg);
    std::cout << "experiment " << exp_name << ": artifacts in " << exp_out_dir
              << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
