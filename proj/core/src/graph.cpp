#include "ccolap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ccolap {

void validate(const WeightedGraph& g) {
  if (g.n <= 0) throw ValidationError("graph needs at least one vertex");
  const Edge* prev = nullptr;
  for (const auto& e : g.edges) {
    if (e.i < 0 || e.j >= g.n) throw ValidationError("edge index out of range");
    if (e.i == e.j) throw ValidationError("self-loop not allowed");
    if (e.i > e.j) throw ValidationError("edge must be stored with i < j");
    if (!std::isfinite(e.w) || e.w < 0.0)
      throw ValidationError("edge weight must be finite and nonnegative");
    if (prev) {
      if (prev->i > e.i || (prev->i == e.i && prev->j >= e.j))
        throw ValidationError(prev->i == e.i && prev->j == e.j
                                  ? "duplicate edge"
                                  : "edges must be sorted");
    }
    prev = &e;
  }
}

WeightedGraph make_graph(int n, std::vector<Edge> edges) {
  for (auto& e : edges)
    if (e.i > e.j) std::swap(e.i, e.j);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  WeightedGraph g{n, std::move(edges)};
  validate(g);
  return g;
}

WeightedGraph build_knn_graph(const Eigen::MatrixXd& points, const KnnOptions& opt) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw ValidationError("need at least two points");
  if (opt.k < 1 || opt.k >= n)
    throw ValidationError("k must satisfy 1 <= k < number of points");
  const int kp = opt.self_tuning_k > 0 ? opt.self_tuning_k : opt.k;
  if (opt.scheme == WeightScheme::self_tuning && kp >= n)
    throw ValidationError("self-tuning neighbor index must be < number of points");
  if (opt.scheme == WeightScheme::gaussian && opt.sigma < 0.0)
    throw ValidationError("gaussian sigma must be positive");

  Eigen::MatrixXd d2(n, n);
  d2.setZero();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).squaredNorm();
      d2(i, j) = d;
      d2(j, i) = d;
    }

  // per point: others sorted by (distance, index)
  std::vector<std::vector<int>> order(n);
  for (int i = 0; i < n; ++i) {
    auto& ord = order[i];
    ord.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) ord.push_back(j);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) {
      return d2(i, a) != d2(i, b) ? d2(i, a) < d2(i, b) : a < b;
    });
  }

  double sigma = opt.sigma;
  if (opt.scheme == WeightScheme::gaussian && sigma == 0.0) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::sqrt(d2(i, order[i][opt.k - 1]));
    sigma = acc / n;
    if (sigma <= 0.0)
      throw NumericalError("degenerate scale: all k-th neighbor distances vanish");
  }

  Eigen::VectorXd local(n);
  if (opt.scheme == WeightScheme::self_tuning) {
    for (int i = 0; i < n; ++i) {
      local(i) = std::sqrt(d2(i, order[i][kp - 1]));
      if (local(i) <= 0.0)
        throw NumericalError("degenerate scale: duplicate points give a zero self-tuning scale");
    }
  }

  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < opt.k; ++c) {
      const int j = order[i][c];
      pairs.emplace(std::min(i, j), std::max(i, j));
    }

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    double w = 1.0;
    switch (opt.scheme) {
      case WeightScheme::gaussian:
        w = std::exp(-d2(i, j) / (2.0 * sigma * sigma));
        break;
      case WeightScheme::self_tuning:
        w = std::exp(-d2(i, j) / (local(i) * local(j)));
        break;
      case WeightScheme::unit:
        w = 1.0;
        break;
    }
    edges.push_back({i, j, w});
  }
  return make_graph(n, std::move(edges));
}

Eigen::MatrixXd adjacency(const WeightedGraph& g) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    w(e.i, e.j) = e.w;
    w(e.j, e.i) = e.w;
  }
  return w;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<int> component_labels(const WeightedGraph& g, double min_weight) {
  UnionFind uf(g.n);
  for (const auto& e : g.edges)
    if (e.w >= min_weight) uf.unite(e.i, e.j);
  std::vector<int> labels(g.n, -1);
  int next = 0;
  for (int v = 0; v < g.n; ++v) {
    const int root = uf.find(v);
    if (labels[root] < 0) labels[root] = next++;
    labels[v] = labels[root];
  }
  return labels;
}

int connected_components(const WeightedGraph& g, double min_weight) {
  const auto labels = component_labels(g, min_weight);
  return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

WeightedGraph drop_light_edges(const WeightedGraph& g, double min_weight) {
  WeightedGraph out;
  out.n = g.n;
  for (const auto& e : g.edges)
    if (e.w >= min_weight) out.edges.push_back(e);
  return out;
}

}  // namespace ccolap
