#include "ccolap/spectral.hpp"

#include <cmath>

#include "ccolap/cluster.hpp"

namespace ccolap {

namespace {

int resolve_truncation(const EigenSystem& es, int truncate) {
  const int n = static_cast<int>(es.lambda.size());
  if (truncate == 0) return n;
  if (truncate < 0 || truncate > n)
    throw ValidationError("truncation must lie in [1, n]");
  return truncate;
}

void check_vertex(const EigenSystem& es, int v) {
  if (v < 0 || v >= es.lambda.size())
    throw ValidationError("vertex index out of range");
}

}  // namespace

Eigen::VectorXd fourier_coefficients(const EigenSystem& es, const Eigen::VectorXd& f) {
  if (f.size() != es.phi.rows())
    throw ValidationError("signal length does not match the basis");
  return es.phi.transpose() * f;
}

Eigen::VectorXd synthesize(const EigenSystem& es, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != es.phi.cols())
    throw ValidationError("coefficient length does not match the basis");
  return es.phi * coeffs;
}

HeatOperator heat_operator(const EigenSystem& es, double t, int truncate) {
  if (t < 0.0) throw ValidationError("diffusion time must be nonnegative");
  const int m = resolve_truncation(es, truncate);
  const Eigen::VectorXd decay = (-t * es.lambda.head(m).array()).exp();
  HeatOperator H;
  H.h = es.phi.leftCols(m) * decay.asDiagonal() * es.phi.leftCols(m).transpose();
  H.t = t;
  H.source = es;
  return H;
}

double diffusion_distance(const EigenSystem& es, double t, int p, int q,
                          int truncate) {
  check_vertex(es, p);
  check_vertex(es, q);
  const int m = resolve_truncation(es, truncate);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double diff = es.phi(p, i) - es.phi(q, i);
    acc += std::exp(-2.0 * t * es.lambda(i)) * diff * diff;
  }
  return std::sqrt(acc);
}

Embedding eigenmap(const EigenSystem& es, int m) {
  if (m < 1 || m > es.phi.cols())
    throw ValidationError("embedding dimension must lie in [1, n]");
  Embedding e;
  e.coords = es.phi.leftCols(m);
  e.kind = EmbeddingKind::eigenmap;
  return e;
}

Embedding diffusion_map(const EigenSystem& es, int m, double t) {
  Embedding e = eigenmap(es, m);
  for (int i = 0; i < m; ++i) e.coords.col(i) *= std::exp(-t * es.lambda(i));
  e.kind = EmbeddingKind::diffusion_map;
  e.t = t;
  return e;
}

std::vector<int> spectral_cluster(const Embedding& embedding, int k,
                                  std::uint64_t seed) {
  if (k < 2) throw ValidationError("need at least two clusters");
  if (k > embedding.coords.rows())
    throw ValidationError("more clusters than points");
  return kmeans(embedding.coords, k, seed).labels;
}

}  // namespace ccolap
