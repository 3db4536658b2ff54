#include "ccolap/jade.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ccolap {

double off_norm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ValidationError("off_norm needs a square matrix");
  return a.squaredNorm() - a.diagonal().squaredNorm();
}

namespace {

void require_symmetric(const Eigen::MatrixXd& a, const char* name) {
  if (a.rows() != a.cols()) throw ValidationError("jade inputs must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError(std::string(name) + " must be symmetric");
}

// One Jacobi rotation on the (i,j) plane, angle minimizing the pair's
// off-diagonal mass across both matrices. Returns |sin theta|.
double rotate_pair(Eigen::MatrixXd& a, Eigen::MatrixXd& b, Eigen::MatrixXd& u,
                   int i, int j) {
  // 2x2 quadratic form G = sum_k h_k h_k^T, h_k = (m_ii - m_jj, 2 m_ij):
  // the rotated on-diagonal contrast is (cos2t, sin2t).h_k, so maximizing
  // (x,y) G (x,y)^T over the unit circle minimizes what stays off-diagonal.
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;
  for (const Eigen::MatrixXd* m : {&a, &b}) {
    const double h1 = (*m)(i, i) - (*m)(j, j);
    const double h2 = 2.0 * (*m)(i, j);
    g11 += h1 * h1;
    g12 += h1 * h2;
    g22 += h2 * h2;
  }
  const double d = 0.5 * (g11 - g22);
  const double r = std::hypot(d, g12);
  if (r == 0.0) return 0.0;  // G is a multiple of I, every angle ties
  double x = d + r;  // principal eigenvector of G, x >= 0 by construction
  double y = g12;
  const double norm = std::hypot(x, y);
  if (norm == 0.0) return 0.0;
  x /= norm;  // cos 2theta
  y /= norm;  // sin 2theta
  const double c = std::sqrt(0.5 * (1.0 + x));
  const double s = y / (2.0 * c);
  if (s == 0.0) return 0.0;

  for (Eigen::MatrixXd* m : {&a, &b}) {
    const Eigen::VectorXd ci = m->col(i), cj = m->col(j);
    m->col(i) = c * ci + s * cj;
    m->col(j) = -s * ci + c * cj;
    const Eigen::RowVectorXd ri = m->row(i), rj = m->row(j);
    m->row(i) = c * ri + s * rj;
    m->row(j) = -s * ri + c * rj;
  }
  const Eigen::VectorXd ui = u.col(i), uj = u.col(j);
  u.col(i) = c * ui + s * uj;
  u.col(j) = -s * ui + c * uj;
  return std::abs(s);
}

}  // namespace

JointBasis jade(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol,
                int max_sweeps) {
  require_symmetric(a, "first matrix");
  require_symmetric(b, "second matrix");
  if (a.rows() != b.rows()) throw ValidationError("jade inputs must share a size");
  const int n = static_cast<int>(a.rows());

  Eigen::MatrixXd wa = a, wb = b;
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);

  JointBasis jb;
  for (jb.sweeps = 0; jb.sweeps < max_sweeps; ) {
    double max_sine = 0.0;
    for (int i = 0; i < n - 1; ++i)
      for (int j = i + 1; j < n; ++j)
        max_sine = std::max(max_sine, rotate_pair(wa, wb, u, i, j));
    ++jb.sweeps;
    jb.last_max_sine = max_sine;
    if (max_sine < tol) break;
  }

  // permutation/sign normalization: columns ascending in the first spectrum
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return wa(p, p) < wa(q, q); });
  Eigen::MatrixXd sorted(n, n);
  for (int c = 0; c < n; ++c) sorted.col(c) = u.col(order[c]);
  apply_sign_convention(sorted);
  jb.u = sorted;

  const Eigen::MatrixXd da = jb.u.transpose() * a * jb.u;
  const Eigen::MatrixXd db = jb.u.transpose() * b * jb.u;
  jb.lambda1 = da.diagonal();
  jb.lambda2 = db.diagonal();
  jb.residual = off_norm(da) + off_norm(db);
  return jb;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> project_to_commuting(
    const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const JointBasis& jb) {
  const auto project = [&](const Eigen::MatrixXd& m) {
    const Eigen::VectorXd diag = (jb.u.transpose() * m * jb.u).diagonal();
    return Eigen::MatrixXd(jb.u * diag.asDiagonal() * jb.u.transpose());
  };
  return {project(a), project(b)};
}

HeatOperator joint_heat_kernel(const JointBasis& jb, double t) {
  if (t < 0.0) throw ValidationError("diffusion time must be nonnegative");
  const int n = static_cast<int>(jb.u.rows());
  const Eigen::VectorXd lam_bar = 0.5 * (jb.lambda1 + jb.lambda2);

  // ascending averaged spectrum for the provenance system
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int p, int q) { return lam_bar(p) < lam_bar(q); });
  EigenSystem source;
  source.phi.resize(n, n);
  source.lambda.resize(n);
  for (int c = 0; c < n; ++c) {
    source.phi.col(c) = jb.u.col(order[c]);
    source.lambda(c) = lam_bar(order[c]);
  }

  HeatOperator H;
  H.t = t;
  const Eigen::VectorXd decay = (-t * source.lambda.array()).exp();
  H.h = source.phi * decay.asDiagonal() * source.phi.transpose();
  H.source = std::move(source);
  return H;
}

double multimodal_diffusion_distance(const JointBasis& jb, double t, int p, int q) {
  const int n = static_cast<int>(jb.u.rows());
  if (p < 0 || p >= n || q < 0 || q >= n)
    throw ValidationError("vertex index out of range");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam_bar = 0.5 * (jb.lambda1(i) + jb.lambda2(i));
    const double diff = jb.u(p, i) - jb.u(q, i);
    acc += std::exp(-2.0 * t * lam_bar) * diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace ccolap
