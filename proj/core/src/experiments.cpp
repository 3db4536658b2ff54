#include "ccolap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>

#include "ccolap/cluster.hpp"
#include "ccolap/correspondence.hpp"
#include "ccolap/errors.hpp"
#include "ccolap/io.hpp"
#include "ccolap/jade.hpp"
#include "ccolap/spectral.hpp"

namespace ccolap {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(seed ^ mix64(a * 0x10001ULL + b + 1));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::ofstream csv_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw ValidationError("cannot open for writing: " + p.string());
  return f;
}

std::filesystem::path experiment_dir(const ExperimentConfig& cfg,
                                     const char* name) {
  const std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

const std::vector<double> kAlphaSweep = {1e4, 1e5, 1e6, 1e7, 1e8};

double off_ratio(const JointBasis& jb, const Eigen::MatrixXd& m) {
  return off_norm(jb.u.transpose() * m * jb.u) / m.squaredNorm();
}

}  // namespace

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const auto rank = static_cast<size_t>(
      std::clamp(std::ceil(p * n), 1.0, n));
  return values[rank - 1];
}

std::vector<ExperimentRecord> conjecture_experiment(const std::vector<int>& sizes,
                                                    int pairs_per_size,
                                                    std::uint64_t seed,
                                                    const std::string& out_dir) {
  if (sizes.empty())
    throw ValidationError("conjecture_experiment: sizes must be nonempty");
  if (pairs_per_size < 1)
    throw ValidationError("conjecture_experiment: pairs_per_size must be >= 1");
  std::vector<ExperimentRecord> records;
  for (const int n : sizes) {
    for (int p = 0; p < pairs_per_size; ++p) {
      ExperimentRecord rec;
      rec.n = n;
      rec.pair_index = p;
      rec.seed = task_seed(seed, static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(p));
      const auto t0 = std::chrono::steady_clock::now();
      const auto [l1, l2] = gen_random_laplacian_pair(n, rec.seed);
      rec.j_value = std::max(0.0, jade(l1.m, l2.m).residual);
      rec.comm_frob = commutator_norm(l1.m, l2.m);
      try {
        const ClEstimate est = cL_value(l1, l2);
        rec.cl = est.value;
        rec.cl_sqrt = std::sqrt(std::max(est.value, 0.0));
        rec.commuting = est.commuting;
      } catch (const NumericalError&) {
        rec.failed = true;
      }
      rec.seconds = seconds_since(t0);
      records.push_back(rec);
    }
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    auto scatter = csv_out(std::filesystem::path(out_dir) /
                           "conjecture_scatter.csv");
    scatter << "n,pair,seed,j,comm_frob,cl,cl_sqrt,commuting,failed\n";
    for (const auto& r : records)
      scatter << r.n << ',' << r.pair_index << ',' << r.seed << ','
              << format_double(r.j_value) << ',' << format_double(r.comm_frob)
              << ',' << format_double(r.cl) << ',' << format_double(r.cl_sqrt)
              << ',' << int{r.commuting} << ',' << int{r.failed} << '\n';
    auto timing = csv_out(std::filesystem::path(out_dir) /
                          "conjecture_timing.csv");
    timing << "n,pair,seconds\n";
    for (const auto& r : records)
      timing << r.n << ',' << r.pair_index << ','
             << format_double(r.seconds) << '\n';
  }
  return records;
}

bool conjecture_corner_empty(const std::vector<ExperimentRecord>& records) {
  std::vector<double> js, cls;
  for (const auto& r : records) {
    if (r.failed) continue;
    js.push_back(r.j_value);
    cls.push_back(r.cl_sqrt);
  }
  if (js.empty()) return true;
  const double q10 = percentile(js, 0.10);
  const double q90 = percentile(cls, 0.90);
  for (size_t i = 0; i < js.size(); ++i)
    if (js[i] < q10 && cls[i] > q90) return false;
  return true;
}

RingOutcome ring_experiment(const ExperimentConfig& cfg) {
  const DatasetPair d = ring_pair(cfg.seed);
  const LaplacianMatrix l1 = laplacian(d.g1), l2 = laplacian(d.g2);
  RingOutcome out;
  std::optional<Eigen::VectorXd> w1, w2;
  for (const double alpha : kAlphaSweep) {
    out.result = cco_solve(make_problem(l1, l2, PatternMode::own, alpha),
                           w1, w2);
    w1 = out.result.u1;
    w2 = out.result.u2;
    ClStage stage;
    stage.alpha = alpha;
    stage.distance_term = out.result.history.back().distance_term;
    stage.commutator_frob = out.result.commutator_frob;
    stage.converged = out.result.converged;
    stage.iterations = out.result.iterations;
    out.stages.push_back(stage);
  }
  const CcoResult& r = out.result;
  const JointBasis jb = jointly_diagonalize_result(r);
  out.off_ratio1 = off_ratio(jb, r.lt1.m);
  out.off_ratio2 = off_ratio(jb, r.lt2.m);
  if (!(std::max(out.off_ratio1, out.off_ratio2) < 1e-10))
    throw NumericalError(
        "ring experiment: the outputs do not share a numerical eigenbasis");
  const JointBasis j0 = jade(l1.m, l2.m);
  out.joint_heat_min = joint_heat_kernel(j0, 20.0).h.minCoeff();
  out.cco_heat_min1 =
      heat_operator(eigendecompose(r.lt1), 20.0).h.minCoeff();
  out.cco_heat_min2 =
      heat_operator(eigendecompose(r.lt2), 20.0).h.minCoeff();
  const auto [pa, pb] = project_to_commuting(l1.m, l2.m, j0);
  out.proj_row_sum1 = max_row_sum_violation(pa);
  out.proj_row_sum2 = max_row_sum_violation(pb);
  out.cco_row_sum1 = max_row_sum_violation(r.lt1.m);
  out.cco_row_sum2 = max_row_sum_violation(r.lt2.m);

  if (!cfg.out_dir.empty()) {
    const auto dir = experiment_dir(cfg, "ring");
    write_matrix_csv((dir / "points1.csv").string(), d.points1);
    write_matrix_csv((dir / "points2.csv").string(), d.points2);
    write_graph_json((dir / "graph1.json").string(), d.g1);
    write_graph_json((dir / "graph2.json").string(), d.g2);
    auto stages = csv_out(dir / "stages.csv");
    stages << "alpha,iterations,converged,distance,commutator\n";
    for (const auto& s : out.stages)
      stages << format_double(s.alpha) << ',' << s.iterations << ','
             << int{s.converged} << ',' << format_double(s.distance_term)
             << ',' << format_double(s.commutator_frob) << '\n';
    write_result_json((dir / "result.json").string(),
                      make_problem(l1, l2, PatternMode::own,
                                   kAlphaSweep.back()),
                      r);
    write_joint_basis_json((dir / "joint_basis.json").string(), jb);
    auto summary = csv_out(dir / "summary.csv");
    summary << "metric,value\n";
    const std::pair<const char*, double> rows[] = {
        {"commutator_final", r.commutator_frob},
        {"distance_final", r.history.back().distance_term},
        {"off_ratio1", out.off_ratio1},
        {"off_ratio2", out.off_ratio2},
        {"joint_heat_min", out.joint_heat_min},
        {"cco_heat_min1", out.cco_heat_min1},
        {"cco_heat_min2", out.cco_heat_min2},
        {"proj_row_sum1", out.proj_row_sum1},
        {"proj_row_sum2", out.proj_row_sum2},
        {"cco_row_sum1", out.cco_row_sum1},
        {"cco_row_sum2", out.cco_row_sum2},
    };
    for (const auto& [name, value] : rows)
      summary << name << ',' << format_double(value) << '\n';
  }
  return out;
}

CirclesOutcome circles_experiment(const ExperimentConfig& cfg) {
  const DatasetPair d = circles_pair(cfg.seed);
  const LaplacianMatrix l1 = laplacian(d.g1), l2 = laplacian(d.g2);
  CirclesOutcome out;
  out.components_in1 = connected_components(d.g1, 1e-3);
  out.components_in2 = connected_components(d.g2, 1e-3);
  out.result = cco_solve(make_problem(l1, l2, PatternMode::own, 1e6));
  const CcoResult& r = out.result;
  const WeightedGraph ga = graph_from_weights(l1.n(), r.lt1.pattern, r.u1);
  const WeightedGraph gb = graph_from_weights(l2.n(), r.lt2.pattern, r.u2);
  out.components_out1 = connected_components(ga, 1e-3);
  out.components_out2 = connected_components(gb, 1e-3);

  if (!cfg.out_dir.empty()) {
    const auto dir = experiment_dir(cfg, "circles");
    write_matrix_csv((dir / "points1.csv").string(), d.points1);
    write_matrix_csv((dir / "points2.csv").string(), d.points2);
    write_graph_json((dir / "graph1.json").string(), d.g1);
    write_graph_json((dir / "graph2.json").string(), d.g2);
    write_graph_json((dir / "cco_graph1.json").string(), ga);
    write_graph_json((dir / "cco_graph2.json").string(), gb);
    write_result_json((dir / "result.json").string(),
                      make_problem(l1, l2, PatternMode::own, 1e6), r);
    auto summary = csv_out(dir / "summary.csv");
    summary << "metric,value\n"
            << "edges_in1," << d.g1.edges.size() << '\n'
            << "edges_in2," << d.g2.edges.size() << '\n'
            << "components_in1," << out.components_in1 << '\n'
            << "components_in2," << out.components_in2 << '\n'
            << "components_out1," << out.components_out1 << '\n'
            << "components_out2," << out.components_out2 << '\n'
            << "distance_final,"
            << format_double(r.history.back().distance_term) << '\n'
            << "commutator_final," << format_double(r.commutator_frob) << '\n';
  }
  return out;
}

std::vector<SwissrollVariant> swissroll_experiment(const ExperimentConfig& cfg) {
  const DatasetPair d = swissroll_pair(cfg.seed);
  const LaplacianMatrix l1 = laplacian(d.g1), l2 = laplacian(d.g2);
  const int n = l1.n();
  OptSettings opt;
  opt.max_iters = cfg.swissroll_max_iters;
  const double alpha = 1e4;

  std::vector<SwissrollVariant> variants;
  std::filesystem::path dir;
  if (!cfg.out_dir.empty()) {
    dir = experiment_dir(cfg, "swissroll");
    write_matrix_csv((dir / "points1.csv").string(), d.points1);
    write_matrix_csv((dir / "points2.csv").string(), d.points2);
    write_graph_json((dir / "graph1.json").string(), d.g1);
    write_graph_json((dir / "graph2.json").string(), d.g2);
  }

  {
    SwissrollVariant v;
    v.name = "plain";
    v.comm_before = commutator_norm(l1.m, l2.m);
    const CcoProblem p = make_problem(l1, l2, PatternMode::own, alpha, opt);
    const CcoResult r = cco_solve(p);
    v.comm_after = r.commutator_frob;
    v.distance = r.history.back().distance_term;
    v.converged = r.converged;
    if (!dir.empty())
      write_result_json((dir / "result_plain.json").string(), p, r);
    variants.push_back(std::move(v));
  }

  const EigenSystem es1 = eigendecompose(l1), es2 = eigendecompose(l2);
  const int m = 20;
  const struct {
    const char* name;
    double fraction;
  } fractions[] = {{"landmarks_100", 1.0},
                   {"landmarks_7.7", 0.077},
                   {"landmarks_2", 0.02}};
  for (const auto& fr : fractions) {
    SwissrollVariant v;
    v.name = fr.name;
    v.landmarks = std::max(1, static_cast<int>(std::lround(fr.fraction * n)));
    // corresponding vertices share an index; landmarks are delta functions
    // at evenly spaced sample points
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, v.landmarks);
    std::vector<IndexPair> pairs;
    for (int q = 0; q < v.landmarks; ++q) {
      const int idx = static_cast<int>(
          static_cast<std::int64_t>(q) * n / v.landmarks);
      F(idx, q) = 1.0;
      pairs.emplace_back(idx, idx);
    }
    const FunctionalCorrespondence fc =
        solve_correspondence(es1, es2, F, F, m);
    v.comm_before = generalized_commutator(l1, l2, fc).norm();
    CcoProblem p = make_problem(l1, l2, PatternMode::own, alpha, opt);
    p.correspondence = fc;
    const CcoResult r = cco_solve(p);
    v.comm_after = r.commutator_frob;
    v.distance = r.history.back().distance_term;
    v.converged = r.converged;
    if (!dir.empty()) {
      write_correspondence_json(
          (dir / ("correspondence_" + std::string(fr.name) + ".json"))
              .string(),
          fc, pairs);
      write_result_json(
          (dir / ("result_" + std::string(fr.name) + ".json")).string(), p, r);
    }
    variants.push_back(std::move(v));
  }

  if (!dir.empty()) {
    auto summary = csv_out(dir / "summary.csv");
    summary << "variant,landmarks,comm_before,comm_after,distance,converged\n";
    for (const auto& v : variants)
      summary << v.name << ',' << v.landmarks << ','
              << format_double(v.comm_before) << ','
              << format_double(v.comm_after) << ','
              << format_double(v.distance) << ',' << int{v.converged} << '\n';
  }
  return variants;
}

MultiviewOutcome multiview_experiment(const ExperimentConfig& cfg) {
  if (cfg.multiview_seeds < 1)
    throw ValidationError("multiview_experiment: needs at least one run");
  MultiviewOutcome out;
  const int k = cfg.multiview_k;
  for (int i = 0; i < cfg.multiview_seeds; ++i) {
    MultiviewRun run;
    run.seed = task_seed(cfg.seed, 0x6d76, static_cast<std::uint64_t>(i));
    const MultiviewData d = blobs_multiview(k, cfg.multiview_n, run.seed);
    KnnOptions ko;
    ko.k = 8;
    const LaplacianMatrix l1 = laplacian(build_knn_graph(d.view1, ko));
    const LaplacianMatrix l2 = laplacian(build_knn_graph(d.view2, ko));

    const auto unimodal = [&](const LaplacianMatrix& l) {
      const Embedding e = eigenmap(eigendecompose(l), k);
      return clustering_metrics(spectral_cluster(e, k, run.seed), d.truth);
    };
    run.view1 = unimodal(l1);
    run.view2 = unimodal(l2);

    // joint pipeline: close the pair, then cluster in the shared frame;
    // warm-started from the data weights, one stage at the mild penalty
    OptSettings opt;
    opt.max_iters = cfg.multiview_max_iters;
    const CcoProblem p = make_problem(l1, l2, PatternMode::own, 1e4, opt);
    const CcoResult r =
        cco_solve(p, initial_weights_1(p), initial_weights_2(p));
    const JointBasis jb = jade(r.lt1.m, r.lt2.m);
    EigenSystem joint;
    joint.phi = jb.u;
    joint.lambda = 0.5 * (jb.lambda1 + jb.lambda2);
    std::vector<int> order(joint.phi.cols());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return joint.lambda[a] < joint.lambda[b]; });
    EigenSystem sorted;
    sorted.phi.resize(joint.phi.rows(), joint.phi.cols());
    sorted.lambda.resize(joint.lambda.size());
    for (size_t c = 0; c < order.size(); ++c) {
      sorted.phi.col(static_cast<int>(c)) = joint.phi.col(order[c]);
      sorted.lambda[static_cast<int>(c)] = joint.lambda[order[c]];
    }
    apply_sign_convention(sorted.phi);
    run.joint = clustering_metrics(
        spectral_cluster(eigenmap(sorted, k), k, run.seed), d.truth);
    out.runs.push_back(run);
  }

  for (const auto& r : out.runs) {
    out.mean_view1 += r.view1.accuracy;
    out.mean_view2 += r.view2.accuracy;
    out.mean_best_unimodal += std::max(r.view1.accuracy, r.view2.accuracy);
    out.mean_joint += r.joint.accuracy;
  }
  const double m = static_cast<double>(out.runs.size());
  out.mean_view1 /= m;
  out.mean_view2 /= m;
  out.mean_best_unimodal /= m;
  out.mean_joint /= m;

  if (!cfg.out_dir.empty()) {
    const auto dir = experiment_dir(cfg, "multiview");
    auto runs = csv_out(dir / "runs.csv");
    runs << "run,seed,acc_view1,nmi_view1,acc_view2,nmi_view2,"
            "acc_joint,nmi_joint\n";
    for (size_t i = 0; i < out.runs.size(); ++i) {
      const auto& r = out.runs[i];
      runs << i << ',' << r.seed << ',' << format_double(r.view1.accuracy)
           << ',' << format_double(r.view1.nmi) << ','
           << format_double(r.view2.accuracy) << ','
           << format_double(r.view2.nmi) << ','
           << format_double(r.joint.accuracy) << ','
           << format_double(r.joint.nmi) << '\n';
    }
    auto summary = csv_out(dir / "summary.csv");
    summary << "metric,value\n"
            << "mean_view1," << format_double(out.mean_view1) << '\n'
            << "mean_view2," << format_double(out.mean_view2) << '\n'
            << "mean_best_unimodal," << format_double(out.mean_best_unimodal)
            << '\n'
            << "mean_joint," << format_double(out.mean_joint) << '\n';
  }
  return out;
}

void run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "ring") {
    ring_experiment(cfg);
  } else if (name == "circles") {
    circles_experiment(cfg);
  } else if (name == "swissroll") {
    swissroll_experiment(cfg);
  } else if (name == "conjecture") {
    std::string dir;
    if (!cfg.out_dir.empty()) {
      dir = (std::filesystem::path(cfg.out_dir) / "conjecture").string();
      std::filesystem::create_directories(dir);
    }
    const auto records =
        conjecture_experiment(cfg.sizes, cfg.pairs_per_size, cfg.seed, dir);
    if (!conjecture_corner_empty(records))
      throw NumericalError(
          "conjecture experiment: a small-J, large-gap corner point appeared");
  } else if (name == "multiview" || name == "multiview_clustering") {
    multiview_experiment(cfg);
  } else {
    throw ValidationError("unknown experiment: " + name);
  }
}

}  // namespace ccolap
