#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ccolap/spectral.hpp"

namespace ccolap {

// Orthonormal U approximately diagonalizing two symmetric matrices at once.
// residual = off(U^T A U) + off(U^T B U), recomputed from the inputs after
// the final column ordering so it stays reproducible to 1e-12.
struct JointBasis {
  Eigen::MatrixXd u;
  Eigen::VectorXd lambda1;  // diag(U^T A U), ascending in lambda1
  Eigen::VectorXd lambda2;  // diag(U^T B U), same column order
  double residual = 0.0;
  int sweeps = 0;
  double last_max_sine = 0.0;
};

// Sum of squared off-diagonal entries.
double off_norm(const Eigen::MatrixXd& a);

// Cyclic Jacobi sweeps; each (i,j) rotation takes the closed-form angle that
// minimizes the pair's contribution to off(A') + off(B'). Stops when the
// largest rotation sine in a sweep drops below tol.
JointBasis jade(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                double tol = 1e-10, int max_sweeps = 100);

// Zero the off-diagonals in U's frame and conjugate back: the nearest
// commuting pair reachable inside that frame.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> project_to_commuting(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const JointBasis& jb);

// H = U diag(e^{-t lam_bar}) U^T with lam_bar = (lambda1 + lambda2)/2.
HeatOperator joint_heat_kernel(const JointBasis& jb, double t);

double multimodal_diffusion_distance(const JointBasis& jb, double t, int p, int q);

}  // namespace ccolap
