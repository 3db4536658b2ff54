#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccolap/cco.hpp"
#include "ccolap/datasets.hpp"
#include "ccolap/metrics.hpp"

namespace ccolap {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "results";  // empty: compute only, write nothing
  // conjecture sweep
  std::vector<int> sizes = {10, 15, 20, 25};
  int pairs_per_size = 15;
  // multiview sweep
  int multiview_seeds = 10;
  int multiview_k = 4;
  int multiview_n = 200;
  // swiss roll solves are the largest problems here; their iteration budget
  // is the knob that keeps the demo interactive
  int swissroll_max_iters = 300;
  // clustering needs a good commuting approximation, not convergence to
  // machine precision, so the per-view solves run under an iteration budget
  int multiview_max_iters = 300;
};

struct ExperimentRecord {
  int n = 0;
  int pair_index = 0;
  std::uint64_t seed = 0;
  double j_value = 0.0;    // joint-diagonalization residual of the inputs
  double comm_frob = 0.0;  // ||[L1,L2]||_F of the inputs
  double cl = 0.0;         // squared-distance estimate of the commuting gap
  double cl_sqrt = 0.0;
  bool commuting = false;  // solver reached the 1e-7*n threshold
  bool failed = false;     // solve threw; excluded from the scatter property
  double seconds = 0.0;    // wall time, kept out of the deterministic CSV
};

// Random-pair scatter study. Writes <out_dir>/conjecture_scatter.csv
// (deterministic) and <out_dir>/conjecture_timing.csv (wall times) when
// out_dir is nonempty.
std::vector<ExperimentRecord> conjecture_experiment(const std::vector<int>& sizes,
                                                    int pairs_per_size,
                                                    std::uint64_t seed,
                                                    const std::string& out_dir);

// The no-counterexample reading of the scatter: no record sits in the
// small-J / large-C_L^{1/2} corner (J below its 10th percentile while
// C_L^{1/2} above its 90th). Failed records are ignored.
bool conjecture_corner_empty(const std::vector<ExperimentRecord>& records);

// Nearest-rank percentile of a sample, p in [0,1].
double percentile(std::vector<double> values, double p);

struct RingOutcome {
  CcoResult result;               // final stage of the penalty sweep
  std::vector<ClStage> stages;    // one row per penalty weight
  double off_ratio1 = 0.0;        // off-energy of the joint frame, relative
  double off_ratio2 = 0.0;
  double joint_heat_min = 0.0;    // most negative joint heat entry, inputs
  double cco_heat_min1 = 0.0;     // heat operators of the two outputs
  double cco_heat_min2 = 0.0;
  double proj_row_sum1 = 0.0;     // row-sum damage of the commuting projection
  double proj_row_sum2 = 0.0;
  double cco_row_sum1 = 0.0;
  double cco_row_sum2 = 0.0;
};

RingOutcome ring_experiment(const ExperimentConfig& cfg);

struct CirclesOutcome {
  CcoResult result;
  int components_in1 = 0;   // inputs, all positive edges
  int components_in2 = 0;
  int components_out1 = 0;  // outputs after dropping weights below 1e-3
  int components_out2 = 0;
};

CirclesOutcome circles_experiment(const ExperimentConfig& cfg);

struct SwissrollVariant {
  std::string name;         // plain, landmarks_100, landmarks_7.7, landmarks_2
  int landmarks = 0;        // 0 for the plain run
  double comm_before = 0.0; // generalized commutator of the inputs
  double comm_after = 0.0;
  double distance = 0.0;    // squared distance of the outputs to the inputs
  bool converged = false;
};

std::vector<SwissrollVariant> swissroll_experiment(const ExperimentConfig& cfg);

struct MultiviewRun {
  std::uint64_t seed = 0;
  ClusteringScore view1, view2, joint;
};

struct MultiviewOutcome {
  std::vector<MultiviewRun> runs;
  double mean_view1 = 0.0;
  double mean_view2 = 0.0;
  double mean_best_unimodal = 0.0;  // per-run best of the two views, averaged
  double mean_joint = 0.0;
};

MultiviewOutcome multiview_experiment(const ExperimentConfig& cfg);

// name: ring | circles | swissroll | conjecture | multiview (also accepts
// multiview_clustering). Runs the pipeline and writes CSV/JSON bundles under
// cfg.out_dir/<name>/.
void run_experiment(const std::string& name, const ExperimentConfig& cfg);

}  // namespace ccolap
