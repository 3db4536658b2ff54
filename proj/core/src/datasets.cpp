#include "ccolap/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ccolap/errors.hpp"
#include "ccolap/rng.hpp"

namespace ccolap {

namespace {

constexpr double kPi = 3.14159265358979323846;

WeightedGraph knn4(const Eigen::MatrixXd& pts) {
  KnnOptions opt;
  opt.k = 4;
  return build_knn_graph(pts, opt);
}

}  // namespace

DatasetPair ring_pair(std::uint64_t seed) {
  const int n = 140;
  Rng rng(seed);
  DatasetPair d;
  d.points1.resize(n, 2);
  d.points2.resize(n, 2);
  // jitter std is 1% of the diameter (unit circle, diameter 2)
  const double jitter = 0.02;
  const double crack = 2.0 * kPi * 0.05;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    d.points1(i, 0) = std::cos(a) + jitter * rng.gaussian();
    d.points1(i, 1) = std::sin(a) + jitter * rng.gaussian();
    const double b = crack / 2.0 + (2.0 * kPi - crack) * i / n;
    d.points2(i, 0) = std::cos(b) + jitter * rng.gaussian();
    d.points2(i, 1) = std::sin(b) + jitter * rng.gaussian();
  }
  d.g1 = knn4(d.points1);
  d.g2 = knn4(d.points2);
  return d;
}

DatasetPair circles_pair(std::uint64_t seed) {
  // radii and per-circle counts scale together, keeping the point spacing
  // along every circle near 0.27; the center offsets close the 0.75 radial
  // gap to about 0.4 on one side, comfortably above the spacing, so pinch
  // points reach across as a third or fourth neighbor but keep both of
  // their own along-arc links in either view
  const double radius[4] = {1.0, 1.75, 2.5, 3.25};
  const int count[4] = {23, 40, 57, 75};
  const double shift[4] = {1.05, 0.7, 0.35, 0.0};
  const int n = 195;
  Rng rng(seed);
  DatasetPair d;
  d.points1.resize(n, 2);
  d.points2.resize(n, 2);
  const double jitter = 0.065;  // 1% of the outer diameter
  // one jitter realization shared by both views: each circle moves rigidly,
  // so the views agree on all within-circle distances and differ only in
  // where the pinch between adjacent circles falls
  int row = 0;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < count[c]; ++i, ++row) {
      const double a = 2.0 * kPi * i / count[c];
      const double x = radius[c] * std::cos(a) + jitter * rng.gaussian();
      const double y = radius[c] * std::sin(a) + jitter * rng.gaussian();
      d.points1(row, 0) = x + shift[c];
      d.points1(row, 1) = y;
      d.points2(row, 0) = x - shift[c];
      d.points2(row, 1) = y;
    }
  }
  d.g1 = knn4(d.points1);
  d.g2 = knn4(d.points2);
  return d;
}

DatasetPair swissroll_pair(std::uint64_t seed) {
  const int n = 400;
  const double lo = 1.5 * kPi, hi = 4.5 * kPi, height = 1.5;
  // winding tightness per view; the sheet gap 2*pi*c of the first view sits
  // near the 4-NN distance, the second is several times wider
  const double tight = 0.025, loose = 0.08;
  Rng rng(seed);
  DatasetPair d;
  d.points1.resize(n, 3);
  d.points2.resize(n, 3);
  std::vector<double> phi(n), y(n);
  for (int i = 0; i < n; ++i) {
    // area-uniform in the sheet: arc density grows linearly with phi
    phi[i] = std::sqrt(lo * lo + rng.uniform() * (hi * hi - lo * lo));
    y[i] = height * rng.uniform();
  }
  const auto embed = [&](Eigen::MatrixXd& pts, double c) {
    const double diameter = std::hypot(2.0 * c * hi, height);
    const double jitter = 0.01 * diameter;
    for (int i = 0; i < n; ++i) {
      const double r = c * phi[i];
      pts(i, 0) = r * std::cos(phi[i]) + jitter * rng.gaussian();
      pts(i, 1) = y[i] + jitter * rng.gaussian();
      pts(i, 2) = r * std::sin(phi[i]) + jitter * rng.gaussian();
    }
  };
  embed(d.points1, tight);
  embed(d.points2, loose);
  d.g1 = knn4(d.points1);
  d.g2 = knn4(d.points2);
  return d;
}

MultiviewData blobs_multiview(int k, int points, std::uint64_t seed) {
  if (k < 2 || k > 12) throw ValidationError("blob count must be in [2,12]");
  if (points < k) throw ValidationError("need at least one point per blob");
  Rng rng(seed);
  const int latent_dim = 3;
  Eigen::MatrixXd centers(k, latent_dim);
  if (k <= 4) {
    // regular tetrahedron vertices, scaled to |center| = 8/sqrt(3)
    const double v[4][3] = {
        {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < latent_dim; ++j) centers(c, j) = v[c][j] * 8.0 / 3.0;
  } else {
    Rng crng = rng.fork(0);
    for (int c = 0; c < k; ++c) {
      for (int j = 0; j < latent_dim; ++j) centers(c, j) = crng.gaussian();
      centers.row(c) *=
          8.0 / std::sqrt(3.0) / std::max(centers.row(c).norm(), 1e-12);
    }
  }

  MultiviewData d;
  d.truth.resize(points);
  Eigen::MatrixXd latent(points, latent_dim);
  Rng prng = rng.fork(1);
  for (int i = 0; i < points; ++i) {
    d.truth[i] = i % k;
    for (int j = 0; j < latent_dim; ++j)
      latent(i, j) = centers(d.truth[i], j) + prng.gaussian();
  }

  const int view_dim = 5;
  const double noise = 1.7;
  const auto make_view = [&](std::uint64_t stream) {
    Rng vrng = rng.fork(stream);
    Eigen::MatrixXd map(view_dim, latent_dim);
    // resample maps that nearly kill a latent direction: such a view folds
    // two centers together and carries no cluster signal to agree on
    do {
      for (int r = 0; r < view_dim; ++r)
        for (int c = 0; c < latent_dim; ++c)
          map(r, c) = vrng.gaussian() / std::sqrt(3.0);
    } while (Eigen::JacobiSVD<Eigen::MatrixXd>(map).singularValues()
                 .minCoeff() < 0.5);
    Eigen::MatrixXd view = latent * map.transpose();
    for (int i = 0; i < points; ++i)
      for (int j = 0; j < view_dim; ++j) view(i, j) += noise * vrng.gaussian();
    return view;
  };
  d.view1 = make_view(2);
  d.view2 = make_view(3);
  return d;
}

std::pair<LaplacianMatrix, LaplacianMatrix> gen_random_laplacian_pair(
    int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("random Laplacian pair needs n >= 3");
  Rng root(seed);
  const auto one = [&](Rng rng) {
    const int kmax = std::min(10, n - 1);
    // first weight drawn for an unordered pair wins; symmetrization adds the
    // reverse picks without changing it
    std::map<IndexPair, double> edges;
    for (int v = 0; v < n; ++v) {
      const int kdeg = rng.uniform_int(1, kmax);
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < kdeg) {
        const int u = rng.uniform_int(0, n - 1);
        if (u != v) chosen.insert(u);
      }
      for (const int u : chosen) {
        const double w = rng.uniform();
        edges.emplace(IndexPair{std::min(u, v), std::max(u, v)}, w);
      }
    }
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (const auto& [ij, w] : edges) list.push_back({ij.first, ij.second, w});
    return laplacian(make_graph(n, std::move(list)));
  };
  auto l1 = one(root.fork(1));
  auto l2 = one(root.fork(2));
  return {std::move(l1), std::move(l2)};
}

}  // namespace ccolap
