#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ccolap/correspondence.hpp"
#include "ccolap/graph.hpp"
#include "ccolap/jade.hpp"
#include "ccolap/laplacian.hpp"

namespace ccolap {

struct OptSettings {
  int max_iters = 2000;
  double armijo_sigma = 1e-4;
  double armijo_beta = 0.5;
  double grad_tol = 1e-9;
  int cg_restart = 50;
};

// Sparsity pattern for the modified Laplacians: each keeps its own edge set,
// or both are allowed the union of the two ("unite"; "union" is reserved).
enum class PatternMode { own, unite };

struct CcoProblem {
  LaplacianMatrix l1, l2;
  Pattern pattern1, pattern2;  // sorted pairs, i < j
  double alpha = 1e6;
  OptSettings opt;
  // When set, the penalty is ||[Lt1, t21 Lt2 t12]||_F^2 instead of the plain
  // commutator; vertex counts of the two graphs may then differ.
  std::optional<FunctionalCorrespondence> correspondence;
};

CcoProblem make_problem(const LaplacianMatrix& l1, const LaplacianMatrix& l2,
                        PatternMode mode = PatternMode::own, double alpha = 1e6,
                        const OptSettings& opt = OptSettings{});
CcoProblem make_problem(const WeightedGraph& g1, const WeightedGraph& g2,
                        PatternMode mode = PatternMode::own, double alpha = 1e6,
                        const OptSettings& opt = OptSettings{});

// Canonical starting point: original edge weights, zero on pattern edges the
// union mode added.
Eigen::VectorXd initial_weights_1(const CcoProblem& p);
Eigen::VectorXd initial_weights_2(const CcoProblem& p);

// Residual below this counts as numerically commuting.
inline double commuting_threshold(int n) { return 1e-7 * n; }

struct CostBreakdown {
  double total = 0.0;
  double distance_term = 0.0;
  double commutator_term = 0.0;  // alpha included
};

CostBreakdown cco_cost(const CcoProblem& p, const Eigen::VectorXd& u1,
                       const Eigen::VectorXd& u2);

// Exact derivative of the penalized objective with respect to each edge
// weight; every weight touches two diagonal and two off-diagonal entries.
std::pair<Eigen::VectorXd, Eigen::VectorXd> cco_gradient(
    const CcoProblem& p, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2);

struct IterationStat {
  double cost = 0.0;
  double distance_term = 0.0;
  double commutator_term = 0.0;
  double step = 0.0;  // accepted line-search step; 0 on the starting entry
};

struct CcoResult {
  Eigen::VectorXd u1, u2;
  LaplacianMatrix lt1, lt2;
  std::vector<IterationStat> history;  // entry 0 is the starting point
  bool converged = false;
  int iterations = 0;
  // Projected-gradient infinity norm at exit, measured on the internally
  // rescaled problem (weights divided by the largest input weight).
  double grad_inf_norm = 0.0;
  // Frobenius norm of the commutator the objective penalizes.
  double commutator_frob = 0.0;
};

// Projected Polak-Ribiere conjugate gradients with Armijo backtracking;
// weights clipped to [0,1] after every trial step. History is monotone
// nonincreasing in total cost.
CcoResult cco_solve(const CcoProblem& p,
                    const std::optional<Eigen::VectorXd>& init1 = std::nullopt,
                    const std::optional<Eigen::VectorXd>& init2 = std::nullopt);

struct ClStage {
  double alpha = 0.0;
  double distance_term = 0.0;
  double commutator_frob = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct ClEstimate {
  double value = 0.0;            // distance term of the chosen stage
  double commutator_frob = 0.0;  // residual of the chosen stage
  double alpha = 0.0;            // penalty weight of the chosen stage
  bool commuting = false;        // chosen residual below commuting_threshold
  std::vector<ClStage> stages;
};

// Warm-started penalty sweep; reports the stage with the smallest commutator
// residual below threshold, or the closest stage with commuting=false.
ClEstimate cL_value(const LaplacianMatrix& l1, const LaplacianMatrix& l2,
                    PatternMode mode = PatternMode::own,
                    const std::vector<double>& alphas = {1e4, 1e5, 1e6, 1e7,
                                                         1e8},
                    const OptSettings& opt = OptSettings{});

// Joint basis of the two output Laplacians. Requires the result to commute
// numerically; the residual carried by the returned basis is the diagnostic
// for near-degenerate pairs.
JointBasis jointly_diagonalize_result(const CcoResult& r);

}  // namespace ccolap
