#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ccolap/errors.hpp"

namespace ccolap {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;
};

// Undirected weighted graph. Edge invariants: 0 <= i < j < n, w >= 0,
// lexicographically sorted, no duplicates. validate() enforces them.
struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;
};

void validate(const WeightedGraph& g);

// Sorts and checks; throws ValidationError on duplicates/self-loops/bad weights.
WeightedGraph make_graph(int n, std::vector<Edge> edges);

enum class WeightScheme { gaussian, self_tuning, unit };

struct KnnOptions {
  int k = 4;
  WeightScheme scheme = WeightScheme::gaussian;
  double sigma = 0.0;     // gaussian scale; 0 selects mean k-th-neighbor distance
  int self_tuning_k = 0;  // k' for per-point scales; 0 selects k
};

// points: one row per point. Symmetrized by union: an edge survives if either
// endpoint picks the other among its k nearest.
WeightedGraph build_knn_graph(const Eigen::MatrixXd& points, const KnnOptions& opt);

Eigen::MatrixXd adjacency(const WeightedGraph& g);

// Components among edges with w >= min_weight (isolated vertices count).
int connected_components(const WeightedGraph& g, double min_weight = 0.0);
std::vector<int> component_labels(const WeightedGraph& g, double min_weight = 0.0);

WeightedGraph drop_light_edges(const WeightedGraph& g, double min_weight);

}  // namespace ccolap
