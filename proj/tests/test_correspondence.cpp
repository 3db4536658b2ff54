#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ccolap/correspondence.hpp"
#include "ccolap/graph.hpp"
#include "ccolap/laplacian.hpp"
#include "ccolap/rng.hpp"

using namespace ccolap;

namespace {

WeightedGraph random_connected(int n, Rng& rng) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v)
    edges.push_back({rng.uniform_int(0, v - 1), v, rng.uniform(0.2, 1.0)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < 0.2) edges.push_back({i, j, rng.uniform(0.2, 1.0)});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.i == b.i && a.j == b.j;
                          }),
              edges.end());
  return make_graph(n, std::move(edges));
}

double residual_of(const Eigen::MatrixXd& c, const Eigen::MatrixXd& phi1bar,
                   const Eigen::MatrixXd& phi2bar, const Eigen::MatrixXd& F,
                   const Eigen::MatrixXd& G) {
  return (c * phi1bar.transpose() * F - phi2bar.transpose() * G).norm();
}

}  // namespace

TEST_SUITE("correspondence") {

TEST_CASE("same graph, F = G = truncated basis: C is the identity") {
  Rng rng(211);
  const auto es = eigendecompose(laplacian(random_connected(12, rng)));
  const int m = 5;
  const Eigen::MatrixXd F = es.phi.leftCols(m);
  const auto fc = solve_correspondence(es, es, F, F, m);
  CHECK((fc.c - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fc.t12 - fc.t21.transpose()).norm() < 1e-12);
}

TEST_CASE("full-basis deltas on an isomorphic copy recover the permutation") {
  Rng rng(223);
  const int n = 10;
  const auto g1 = random_connected(n, rng);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(0, i)]);

  std::vector<Edge> edges2;
  for (const auto& e : g1.edges) edges2.push_back({perm[e.i], perm[e.j], e.w});
  const auto g2 = make_graph(n, std::move(edges2));

  const auto es1 = eigendecompose(laplacian(g1));
  const auto es2 = eigendecompose(laplacian(g2));

  const Eigen::MatrixXd F = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) G(perm[i], i) = 1.0;

  const auto fc = solve_correspondence(es1, es2, F, G, n);
  CHECK((fc.t12 - G).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("underdetermined single-function case matches the pseudoinverse") {
  Rng rng(227);
  const auto es1 = eigendecompose(laplacian(random_connected(9, rng)));
  const auto es2 = eigendecompose(laplacian(random_connected(9, rng)));
  const int m = 2;
  Eigen::MatrixXd F(9, 1), G(9, 1);
  for (int i = 0; i < 9; ++i) {
    F(i, 0) = rng.gaussian();
    G(i, 0) = rng.gaussian();
  }
  const auto fc = solve_correspondence(es1, es2, F, G, m);

  const Eigen::MatrixXd a1 = es1.phi.leftCols(m).transpose() * F;
  const Eigen::MatrixXd a2 = es2.phi.leftCols(m).transpose() * G;
  // row r of C is the minimum-norm solution of  a1^T c_r^T = a2_r^T
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a1.transpose(),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  Eigen::MatrixXd pinv_solution(m, m);
  for (int r = 0; r < m; ++r)
    pinv_solution.row(r) = svd.solve(a2.row(r).transpose()).transpose();
  CHECK((fc.c - pinv_solution).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("least-squares beats the zero and identity baselines") {
  Rng rng(229);
  for (int trial = 0; trial < 5; ++trial) {
    const auto es1 = eigendecompose(laplacian(random_connected(11, rng)));
    const auto es2 = eigendecompose(laplacian(random_connected(11, rng)));
    const int m = 4, q = 6;
    Eigen::MatrixXd F(11, q), G(11, q);
    for (int i = 0; i < 11; ++i)
      for (int c = 0; c < q; ++c) {
        F(i, c) = rng.gaussian();
        G(i, c) = rng.gaussian();
      }
    const auto fc = solve_correspondence(es1, es2, F, G, m);
    const double r = residual_of(fc.c, fc.phi1bar, fc.phi2bar, F, G);
    const double r0 = residual_of(Eigen::MatrixXd::Zero(m, m), fc.phi1bar, fc.phi2bar, F, G);
    const double ri = residual_of(Eigen::MatrixXd::Identity(m, m), fc.phi1bar, fc.phi2bar, F, G);
    CHECK(r <= r0 + 1e-12);
    CHECK(r <= ri + 1e-12);
  }
}

TEST_CASE("stored transfer operators match their defining products") {
  Rng rng(233);
  const auto es1 = eigendecompose(laplacian(random_connected(8, rng)));
  const auto es2 = eigendecompose(laplacian(random_connected(13, rng)));
  const int m = 5, q = 7;
  Eigen::MatrixXd F(8, q), G(13, q);
  for (int i = 0; i < 8; ++i)
    for (int c = 0; c < q; ++c) F(i, c) = rng.gaussian();
  for (int i = 0; i < 13; ++i)
    for (int c = 0; c < q; ++c) G(i, c) = rng.gaussian();
  const auto fc = solve_correspondence(es1, es2, F, G, m);
  CHECK((fc.t12 - fc.phi2bar * fc.c * fc.phi1bar.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((fc.t21 - fc.phi1bar * fc.c.transpose() * fc.phi2bar.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(fc.t12.rows() == 13);
  CHECK(fc.t12.cols() == 8);

  // override hook: an independently supplied reverse coefficient matrix
  Eigen::MatrixXd c21(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c21(i, j) = rng.gaussian();
  const auto fc2 = FunctionalCorrespondence::from_c_pair(fc.c, c21, fc.phi1bar, fc.phi2bar);
  CHECK((fc2.t21 - fc.phi1bar * c21 * fc.phi2bar.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((fc2.t12 - fc.t12).norm() == 0.0);
}

TEST_CASE("solver input validation") {
  Rng rng(239);
  const auto es = eigendecompose(laplacian(random_connected(6, rng)));
  Eigen::MatrixXd F(6, 1), G(6, 1);
  F.setZero();
  G.setOnes();
  CHECK_THROWS_AS(solve_correspondence(es, es, F, G, 3), ValidationError);

  Eigen::MatrixXd empty(6, 0);
  CHECK_THROWS_AS(solve_correspondence(es, es, empty, empty, 3), ValidationError);
  F.setOnes();
  CHECK_THROWS_AS(solve_correspondence(es, es, F, G, 0), ValidationError);
  CHECK_THROWS_AS(solve_correspondence(es, es, F, G, 7), ValidationError);

  Eigen::MatrixXd wrong(5, 1);
  wrong.setOnes();
  CHECK_THROWS_AS(solve_correspondence(es, es, wrong, G, 3), ValidationError);
  Eigen::MatrixXd q2(6, 2);
  q2.setOnes();
  CHECK_THROWS_AS(solve_correspondence(es, es, F, q2, 3), ValidationError);
}

TEST_CASE("generalized commutator with identity transfers is the plain commutator") {
  Rng rng(241);
  const auto L1 = laplacian(random_connected(7, rng));
  const auto L2 = laplacian(random_connected(7, rng));
  const auto id = FunctionalCorrespondence::identity(7);
  const Eigen::MatrixXd gc = generalized_commutator(L1, L2, id);
  CHECK((gc - commutator(L1.m, L2.m)).cwiseAbs().maxCoeff() < 1e-14);

  // identical operators commute with themselves
  const Eigen::MatrixXd self = generalized_commutator(L1, L1, id);
  CHECK(self.cwiseAbs().maxCoeff() < 1e-12);

  const auto Lz = laplacian(make_graph(7, {}));
  CHECK(generalized_commutator(L1, Lz, id).norm() == 0.0);
}

TEST_CASE("generalized commutator equals the composed-operator bracket") {
  Rng rng(251);
  const auto L1 = laplacian(random_connected(6, rng));
  const auto L2 = laplacian(random_connected(9, rng));
  const auto es1 = eigendecompose(L1);
  const auto es2 = eigendecompose(L2);
  const int m = 4, q = 5;
  Eigen::MatrixXd F(6, q), G(9, q);
  for (int i = 0; i < 6; ++i)
    for (int c = 0; c < q; ++c) F(i, c) = rng.gaussian();
  for (int i = 0; i < 9; ++i)
    for (int c = 0; c < q; ++c) G(i, c) = rng.gaussian();
  const auto fc = solve_correspondence(es1, es2, F, G, m);

  const Eigen::MatrixXd composed = fc.t21 * L2.m * fc.t12;
  const Eigen::MatrixXd gc = generalized_commutator(L1, L2, fc);
  CHECK((gc - (L1.m * composed - composed * L1.m)).cwiseAbs().maxCoeff() < 1e-13);
  // antisymmetry under swapping the bracket operands
  CHECK((gc + (composed * L1.m - L1.m * composed)).cwiseAbs().maxCoeff() < 1e-13);

  const auto wrong = FunctionalCorrespondence::identity(5);
  CHECK_THROWS_AS(generalized_commutator(L1, L2, wrong), ValidationError);
}

}  // TEST_SUITE
