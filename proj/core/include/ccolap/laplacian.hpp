#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ccolap/graph.hpp"

namespace ccolap {

using IndexPair = std::pair<int, int>;
using Pattern = std::vector<IndexPair>;  // i < j, sorted, unique

// Dense symmetric L = D - W. `pattern` records which off-diagonal pairs are
// allowed to be nonzero; construction keeps row sums exactly balanced by
// accumulating each diagonal entry from its own row's off-diagonals.
struct LaplacianMatrix {
  Eigen::MatrixXd m;
  Pattern pattern;

  int n() const { return static_cast<int>(m.rows()); }
};

LaplacianMatrix laplacian(const WeightedGraph& g);

// L from weight vector u aligned with `pattern` (u[l] is the weight of edge
// pattern[l]). Entries of u may be zero; pattern is kept as given.
LaplacianMatrix laplacian_from_weights(int n, const Pattern& pattern,
                                       const Eigen::VectorXd& u);

// Weight vector of L in `pattern` order: u[l] = -L(i,j).
Eigen::VectorXd weights_of(const LaplacianMatrix& L);

WeightedGraph graph_from_weights(int n, const Pattern& pattern,
                                 const Eigen::VectorXd& u);

// Throws ValidationError naming the first violated Laplacian property:
// exact symmetry, row sums within 1e-12*n, off-diagonals <= 0 confined to
// pattern, diagonal >= 0.
void check_laplacian(const LaplacianMatrix& L);
bool is_legal_laplacian(const LaplacianMatrix& L);

// Worst absolute row sum; the quantity a commuting-projection can break.
double max_row_sum_violation(const Eigen::MatrixXd& m);

struct EigenSystem {
  Eigen::MatrixXd phi;     // orthonormal columns
  Eigen::VectorXd lambda;  // ascending
};

// Deterministic sign convention shared by every eigenvector-producing routine:
// first component with magnitude > 1e-12 made positive.
void apply_sign_convention(Eigen::MatrixXd& columns);

EigenSystem eigendecompose(const LaplacianMatrix& L);
EigenSystem eigendecompose_sym(const Eigen::MatrixXd& sym);

Eigen::MatrixXd commutator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double commutator_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ccolap
