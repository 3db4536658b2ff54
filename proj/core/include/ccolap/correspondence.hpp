#pragma once

#include <Eigen/Dense>

#include "ccolap/laplacian.hpp"

namespace ccolap {

// Coefficient matrix C expressed in truncated eigenbases, plus the dense
// transfer operators built from it. T21 defaults to the adjoint transfer
// Phi1bar C^T Phi2bar^T; from_c_pair supplies an independently solved
// reverse map instead.
struct FunctionalCorrespondence {
  Eigen::MatrixXd c;        // m x m
  Eigen::MatrixXd phi1bar;  // n1 x m
  Eigen::MatrixXd phi2bar;  // n2 x m
  Eigen::MatrixXd t12;      // n2 x n1
  Eigen::MatrixXd t21;      // n1 x n2

  static FunctionalCorrespondence identity(int n);
  static FunctionalCorrespondence from_c(const Eigen::MatrixXd& c,
                                         const Eigen::MatrixXd& phi1bar,
                                         const Eigen::MatrixXd& phi2bar);
  static FunctionalCorrespondence from_c_pair(const Eigen::MatrixXd& c12,
                                              const Eigen::MatrixXd& c21,
                                              const Eigen::MatrixXd& phi1bar,
                                              const Eigen::MatrixXd& phi2bar);
};

// Least-squares C from corresponding function columns F (on graph 1) and G
// (on graph 2) through the first m eigenvectors of each side. Ridge 1e-10 is
// added only when the normal-equation matrix is numerically rank-deficient.
FunctionalCorrespondence solve_correspondence(const EigenSystem& es1,
                                              const EigenSystem& es2,
                                              const Eigen::MatrixXd& F,
                                              const Eigen::MatrixXd& G, int m);

// L1 (T21 L2 T12) - (T21 L2 T12) L1, an n1 x n1 matrix.
Eigen::MatrixXd generalized_commutator(const LaplacianMatrix& l1,
                                       const LaplacianMatrix& l2,
                                       const FunctionalCorrespondence& fc);

}  // namespace ccolap
