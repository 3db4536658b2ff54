#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ccolap/laplacian.hpp"

namespace ccolap {

struct HeatOperator {
  Eigen::MatrixXd h;
  double t = 0.0;
  EigenSystem source;
};

enum class EmbeddingKind { eigenmap, diffusion_map };

struct Embedding {
  Eigen::MatrixXd coords;  // row p = image of vertex p
  EmbeddingKind kind = EmbeddingKind::eigenmap;
  double t = 0.0;  // transfer-function time, diffusion maps only
};

Eigen::VectorXd fourier_coefficients(const EigenSystem& es, const Eigen::VectorXd& f);
Eigen::VectorXd synthesize(const EigenSystem& es, const Eigen::VectorXd& coeffs);

// H = sum_{i<=m} e^{-t lambda_i} phi_i phi_i^T; truncate = 0 keeps all n terms.
HeatOperator heat_operator(const EigenSystem& es, double t, int truncate = 0);

double diffusion_distance(const EigenSystem& es, double t, int p, int q,
                          int truncate = 0);

Embedding eigenmap(const EigenSystem& es, int m);
Embedding diffusion_map(const EigenSystem& es, int m, double t);

std::vector<int> spectral_cluster(const Embedding& embedding, int k,
                                  std::uint64_t seed);

}  // namespace ccolap
