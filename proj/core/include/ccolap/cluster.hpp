#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ccolap {

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // k x m
  double inertia = 0.0;
};

// k-means++ seeding, Lloyd iterations until the relative inertia change drops
// below tol. `restarts` independent runs, best inertia kept. Deterministic
// given seed.
KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                    int restarts = 10, int max_iters = 300, double tol = 1e-8);

}  // namespace ccolap
