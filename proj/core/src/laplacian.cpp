#include "ccolap/laplacian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace ccolap {

namespace {

void check_pattern(int n, const Pattern& pattern) {
  const IndexPair* prev = nullptr;
  for (const auto& p : pattern) {
    if (p.first < 0 || p.second >= n || p.first >= p.second)
      throw ValidationError("pattern pair out of range or not i < j");
    if (prev && !(*prev < p))
      throw ValidationError("pattern must be sorted and unique");
    prev = &p;
  }
}

}  // namespace

LaplacianMatrix laplacian_from_weights(int n, const Pattern& pattern,
                                       const Eigen::VectorXd& u) {
  if (n <= 0) throw ValidationError("laplacian needs at least one vertex");
  check_pattern(n, pattern);
  if (u.size() != static_cast<Eigen::Index>(pattern.size()))
    throw ValidationError("weight vector length does not match pattern");

  LaplacianMatrix L;
  L.pattern = pattern;
  L.m = Eigen::MatrixXd::Zero(n, n);
  for (size_t l = 0; l < pattern.size(); ++l) {
    const auto [i, j] = pattern[l];
    const double w = u(static_cast<Eigen::Index>(l));
    if (!std::isfinite(w)) throw ValidationError("weight must be finite");
    L.m(i, j) -= w;
    L.m(j, i) -= w;
    L.m(i, i) += w;
    L.m(j, j) += w;
  }
  return L;
}

LaplacianMatrix laplacian(const WeightedGraph& g) {
  validate(g);
  Pattern pattern;
  pattern.reserve(g.edges.size());
  Eigen::VectorXd u(static_cast<Eigen::Index>(g.edges.size()));
  for (size_t l = 0; l < g.edges.size(); ++l) {
    pattern.emplace_back(g.edges[l].i, g.edges[l].j);
    u(static_cast<Eigen::Index>(l)) = g.edges[l].w;
  }
  return laplacian_from_weights(g.n, pattern, u);
}

Eigen::VectorXd weights_of(const LaplacianMatrix& L) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(L.pattern.size()));
  for (size_t l = 0; l < L.pattern.size(); ++l) {
    const auto [i, j] = L.pattern[l];
    const double w = -L.m(i, j);
    u(static_cast<Eigen::Index>(l)) = w == 0.0 ? 0.0 : w;  // normalize -0
  }
  return u;
}

WeightedGraph graph_from_weights(int n, const Pattern& pattern,
                                 const Eigen::VectorXd& u) {
  check_pattern(n, pattern);
  if (u.size() != static_cast<Eigen::Index>(pattern.size()))
    throw ValidationError("weight vector length does not match pattern");
  std::vector<Edge> edges;
  edges.reserve(pattern.size());
  for (size_t l = 0; l < pattern.size(); ++l) {
    const auto [i, j] = pattern[l];
    edges.push_back({i, j, u(static_cast<Eigen::Index>(l))});
  }
  return make_graph(n, std::move(edges));
}

void check_laplacian(const LaplacianMatrix& L) {
  const int n = L.n();
  if (n == 0 || L.m.cols() != n) throw ValidationError("laplacian must be square");
  check_pattern(n, L.pattern);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (L.m(i, j) != L.m(j, i))
        throw ValidationError("laplacian must be exactly symmetric");
  if (L.m.diagonal().minCoeff() < 0.0)
    throw ValidationError("laplacian diagonal must be nonnegative");
  const double row_tol = 1e-12 * n;
  for (int i = 0; i < n; ++i)
    if (std::abs(L.m.row(i).sum()) > row_tol)
      throw ValidationError("laplacian row sums must vanish");
  Eigen::MatrixXd allowed = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : L.pattern) {
    allowed(i, j) = 1.0;
    allowed(j, i) = 1.0;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (L.m(i, j) > 0.0)
        throw ValidationError("laplacian off-diagonals must be <= 0");
      if (L.m(i, j) != 0.0 && allowed(i, j) == 0.0)
        throw ValidationError("nonzero entry outside the sparsity pattern");
    }
}

bool is_legal_laplacian(const LaplacianMatrix& L) {
  try {
    check_laplacian(L);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

double max_row_sum_violation(const Eigen::MatrixXd& m) {
  return m.rowwise().sum().cwiseAbs().maxCoeff();
}

void apply_sign_convention(Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      if (std::abs(columns(r, c)) > 1e-12) {
        if (columns(r, c) < 0.0) columns.col(c) = -columns.col(c);
        break;
      }
    }
  }
}

EigenSystem eigendecompose_sym(const Eigen::MatrixXd& sym) {
  if (sym.rows() != sym.cols()) throw ValidationError("matrix must be square");
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  if ((sym - sym.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (sym + sym.transpose()));
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");
  EigenSystem es;
  es.phi = solver.eigenvectors();
  es.lambda = solver.eigenvalues();
  apply_sign_convention(es.phi);
  return es;
}

EigenSystem eigendecompose(const LaplacianMatrix& L) {
  return eigendecompose_sym(L.m);
}

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("commutator needs two square matrices of equal size");
  return a * b - b * a;
}

double commutator_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return commutator(a, b).norm();
}

}  // namespace ccolap
