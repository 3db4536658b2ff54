#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ccolap/cco.hpp"
#include "ccolap/correspondence.hpp"
#include "ccolap/graph.hpp"
#include "ccolap/jade.hpp"

namespace ccolap {

// Doubles are printed with %.17g everywhere so repeated runs are
// byte-identical and values round-trip exactly.
std::string format_double(double v);

Eigen::MatrixXd read_points_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

// Edge list with header "i,j,w".
WeightedGraph read_edge_csv(const std::string& path);
void write_edge_csv(const std::string& path, const WeightedGraph& g);

// { "n": int, "edges": [[i,j,w],...] }
WeightedGraph read_graph_json(const std::string& path);
void write_graph_json(const std::string& path, const WeightedGraph& g);

// { "residual": r, "lambda1": [...], "lambda2": [...], "U": [[...]] }
void write_joint_basis_json(const std::string& path, const JointBasis& jb);
JointBasis read_joint_basis_json(const std::string& path);

// { "graph1": ..., "graph2": ..., "pattern": "own"|"union", "alpha": float,
//   "opt": {...} }
CcoProblem read_problem_json(const std::string& path);
void write_result_json(const std::string& path, const CcoProblem& p,
                       const CcoResult& r);

// { "m": int, "C": [[...]], "landmarks": [[i1,i2],...] }
void write_correspondence_json(const std::string& path,
                               const FunctionalCorrespondence& fc,
                               const std::vector<IndexPair>& landmarks);

void write_labels_csv(const std::string& path, const std::vector<int>& labels);

}  // namespace ccolap
