#include "ccolap/cluster.hpp"

#include <limits>

#include "ccolap/errors.hpp"
#include "ccolap/rng.hpp"

namespace ccolap {

namespace {

// Squared distances from every row of x to `center`.
Eigen::VectorXd dist2_to(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& center) {
  return (x.rowwise() - center).rowwise().squaredNorm();
}

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd centers(k, x.cols());
  centers.row(0) = x.row(static_cast<int>(rng.below(n)));
  Eigen::VectorXd d2 = dist2_to(x, centers.row(0));
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.below(n));
    } else {
      // sample proportionally to d2
      double target = rng.uniform() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        target -= d2(i);
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin(dist2_to(x, centers.row(c)));
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, std::uint64_t seed,
                    int restarts, int max_iters, double tol) {
  const int n = static_cast<int>(x.rows());
  if (k < 1) throw ValidationError("k must be positive");
  if (k > n) throw ValidationError("more clusters than points");

  Rng rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd centers = seed_centers(x, k, rng);
    std::vector<int> labels(n, 0);
    double inertia = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iters; ++iter) {
      // assignment, ties to the lower center index
      double new_inertia = 0.0;
      for (int i = 0; i < n; ++i) {
        int arg = 0;
        double bestd = (x.row(i) - centers.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
          const double d = (x.row(i) - centers.row(c)).squaredNorm();
          if (d < bestd) {
            bestd = d;
            arg = c;
          }
        }
        labels[i] = arg;
        new_inertia += bestd;
      }

      // update
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
      std::vector<int> counts(k, 0);
      for (int i = 0; i < n; ++i) {
        sums.row(labels[i]) += x.row(i);
        ++counts[labels[i]];
      }
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) {
          centers.row(c) = sums.row(c) / counts[c];
        } else {
          // re-seed an empty cluster at the worst-served point
          int worst = 0;
          double worstd = -1.0;
          for (int i = 0; i < n; ++i) {
            const double d = (x.row(i) - centers.row(labels[i])).squaredNorm();
            if (d > worstd) {
              worstd = d;
              worst = i;
            }
          }
          centers.row(c) = x.row(worst);
        }
      }

      const bool settled =
          inertia != std::numeric_limits<double>::infinity() &&
          inertia - new_inertia <= tol * std::max(inertia, 1e-300);
      inertia = new_inertia;
      if (settled) break;
    }

    if (inertia < best.inertia) {
      best.inertia = inertia;
      best.labels = labels;
      best.centers = centers;
    }
  }
  return best;
}

}  // namespace ccolap
