#include "ccolap/correspondence.hpp"

#include <Eigen/Eigenvalues>

namespace ccolap {

FunctionalCorrespondence FunctionalCorrespondence::from_c(
    const Eigen::MatrixXd& c, const Eigen::MatrixXd& phi1bar,
    const Eigen::MatrixXd& phi2bar) {
  if (c.rows() != c.cols() || c.rows() != phi1bar.cols() ||
      c.rows() != phi2bar.cols())
    throw ValidationError("coefficient matrix must be m x m matching both bases");
  FunctionalCorrespondence fc;
  fc.c = c;
  fc.phi1bar = phi1bar;
  fc.phi2bar = phi2bar;
  fc.t12 = phi2bar * c * phi1bar.transpose();
  fc.t21 = phi1bar * c.transpose() * phi2bar.transpose();
  return fc;
}

FunctionalCorrespondence FunctionalCorrespondence::from_c_pair(
    const Eigen::MatrixXd& c12, const Eigen::MatrixXd& c21,
    const Eigen::MatrixXd& phi1bar, const Eigen::MatrixXd& phi2bar) {
  FunctionalCorrespondence fc = from_c(c12, phi1bar, phi2bar);
  if (c21.rows() != c12.rows() || c21.cols() != c12.cols())
    throw ValidationError("reverse coefficient matrix must match the forward one");
  fc.t21 = phi1bar * c21 * phi2bar.transpose();
  return fc;
}

FunctionalCorrespondence FunctionalCorrespondence::identity(int n) {
  if (n <= 0) throw ValidationError("identity correspondence needs n >= 1");
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  return from_c(eye, eye, eye);
}

FunctionalCorrespondence solve_correspondence(const EigenSystem& es1,
                                              const EigenSystem& es2,
                                              const Eigen::MatrixXd& F,
                                              const Eigen::MatrixXd& G, int m) {
  const Eigen::Index n1 = es1.phi.rows(), n2 = es2.phi.rows();
  if (m < 1 || m > std::min(n1, n2))
    throw ValidationError("basis truncation must lie in [1, min(n1, n2)]");
  const Eigen::Index q = F.cols();
  if (q < 1) throw ValidationError("need at least one corresponding function");
  if (G.cols() != q) throw ValidationError("F and G must pair up column-wise");
  if (F.rows() != n1 || G.rows() != n2)
    throw ValidationError("function rows must match the vertex counts");
  if (F.norm() == 0.0) throw ValidationError("source functions must not all vanish");

  const Eigen::MatrixXd phi1bar = es1.phi.leftCols(m);
  const Eigen::MatrixXd phi2bar = es2.phi.leftCols(m);
  const Eigen::MatrixXd a1 = phi1bar.transpose() * F;  // m x q
  const Eigen::MatrixXd a2 = phi2bar.transpose() * G;

  // C a1 = a2 row-wise, i.e. a1^T C^T = a2^T; the rank-revealing solve yields
  // the minimum-norm solution when the system is underdetermined
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a1.transpose());
  cod.setThreshold(1e-12);
  const Eigen::MatrixXd c = cod.solve(a2.transpose()).transpose();
  return FunctionalCorrespondence::from_c(c, phi1bar, phi2bar);
}

Eigen::MatrixXd generalized_commutator(const LaplacianMatrix& l1,
                                       const LaplacianMatrix& l2,
                                       const FunctionalCorrespondence& fc) {
  const int n1 = l1.n(), n2 = l2.n();
  if (fc.t12.rows() != n2 || fc.t12.cols() != n1 || fc.t21.rows() != n1 ||
      fc.t21.cols() != n2)
    throw ValidationError("transfer operator shapes do not match the laplacians");
  const Eigen::MatrixXd composed = fc.t21 * l2.m * fc.t12;
  return l1.m * composed - composed * l1.m;
}

}  // namespace ccolap
