#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ccolap/graph.hpp"
#include "ccolap/laplacian.hpp"

namespace ccolap {

// Two views of one point set, vertex i corresponding across the views.
struct DatasetPair {
  WeightedGraph g1;
  WeightedGraph g2;
  Eigen::MatrixXd points1;  // row per vertex
  Eigen::MatrixXd points2;
};

// Ring and cracked ring, 140 points each, 4-NN gaussian weights. The crack
// squeezes the second ring onto an open arc, so its graph never wraps around.
DatasetPair ring_pair(std::uint64_t seed);

// Four eccentric circles, 195 points total. The two views push the circles
// toward opposite sides, so each view picks up nearest-neighbor bridges
// between adjacent circles at a different place.
DatasetPair circles_pair(std::uint64_t seed);

// Two swiss rolls over the same latent sheet with different winding
// tightness: the tight one picks up cross-sheet shortcuts, the loose one
// stays plane-like. Points are 3-D.
DatasetPair swissroll_pair(std::uint64_t seed);

struct MultiviewData {
  Eigen::MatrixXd view1;  // row per point
  Eigen::MatrixXd view2;
  std::vector<int> truth;
};

// k gaussian blobs on a simplex in 3-D latent space, observed through two
// independent random linear maps into 5-D plus isotropic noise.
MultiviewData blobs_multiview(int k, int points, std::uint64_t seed);

// Random Laplacian pair: every vertex draws K ~ U{1..min(10, n-1)} distinct
// neighbors, edges symmetrized, weights U[0,1). The two graphs come from
// forked streams of the seed and are unrelated.
std::pair<LaplacianMatrix, LaplacianMatrix> gen_random_laplacian_pair(
    int n, std::uint64_t seed);

}  // namespace ccolap
