#include "ccolap/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccolap/errors.hpp"

namespace ccolap {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open: " + path);
  return f;
}

json parse_file(const std::string& path) {
  auto f = open_in(path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// strict double parse; the whole field must be consumed
double parse_field(const std::string& field, const std::string& path, int line) {
  const char* s = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  while (end && *end == ' ') ++end;
  if (end == s || (end && *end != '\0'))
    throw ValidationError(path + ":" + std::to_string(line) +
                          ": not a number: '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool numeric_row(const std::vector<std::string>& fields) {
  for (const auto& f : fields) {
    const char* s = f.c_str();
    char* end = nullptr;
    std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || (end && *end != '\0')) return false;
  }
  return !fields.empty();
}

json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.i, e.j, e.w});
  return json{{"n", g.n}, {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw ValidationError(where + ": graph object needs fields n and edges");
  if (!j["n"].is_number_integer())
    throw ValidationError(where + ": n must be an integer");
  std::vector<Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 3)
      throw ValidationError(where + ": each edge must be [i, j, w]");
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  try {
    return make_graph(j["n"].get<int>(), std::move(edges));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ValidationError(where + ": expected an array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw ValidationError(where + ": ragged rows");
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

void dump_to(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Eigen::MatrixXd read_points_csv(const std::string& path) {
  auto f = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  int cols = -1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (rows.empty() && cols < 0 && !numeric_row(fields)) continue;  // header
    if (cols < 0) cols = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != cols)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(cols) + " fields");
    std::vector<double> row(cols);
    for (int c = 0; c < cols; ++c) row[c] = parse_field(fields[c], path, lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");
  Eigen::MatrixXd m(static_cast<int>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < cols; ++c) m(static_cast<int>(i), c) = rows[i][c];
  return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  auto f = open_out(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) f << ',';
      f << format_double(m(i, j));
    }
    f << '\n';
  }
}

WeightedGraph read_edge_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  std::vector<Edge> edges;
  int lineno = 0;
  int n = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line == "i,j,w")) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected i,j,w");
    Edge e;
    e.i = static_cast<int>(parse_field(fields[0], path, lineno));
    e.j = static_cast<int>(parse_field(fields[1], path, lineno));
    e.w = parse_field(fields[2], path, lineno);
    n = std::max(n, std::max(e.i, e.j) + 1);
    edges.push_back(e);
  }
  return make_graph(n, std::move(edges));
}

void write_edge_csv(const std::string& path, const WeightedGraph& g) {
  auto f = open_out(path);
  f << "i,j,w\n";
  for (const auto& e : g.edges)
    f << e.i << ',' << e.j << ',' << format_double(e.w) << '\n';
}

WeightedGraph read_graph_json(const std::string& path) {
  return graph_from_json(parse_file(path), path);
}

void write_graph_json(const std::string& path, const WeightedGraph& g) {
  dump_to(path, graph_to_json(g));
}

void write_joint_basis_json(const std::string& path, const JointBasis& jb) {
  dump_to(path, json{{"residual", jb.residual},
                     {"sweeps", jb.sweeps},
                     {"lambda1", vector_to_json(jb.lambda1)},
                     {"lambda2", vector_to_json(jb.lambda2)},
                     {"U", matrix_to_json(jb.u)}});
}

JointBasis read_joint_basis_json(const std::string& path) {
  const json j = parse_file(path);
  JointBasis jb;
  for (const char* key : {"residual", "sweeps", "lambda1", "lambda2", "U"})
    if (!j.contains(key))
      throw ValidationError(path + ": missing field " + key);
  jb.residual = j["residual"].get<double>();
  jb.sweeps = j["sweeps"].get<int>();
  jb.lambda1 = vector_from_json(j["lambda1"], path);
  jb.lambda2 = vector_from_json(j["lambda2"], path);
  jb.u = matrix_from_json(j["U"], path);
  if (jb.u.rows() != jb.u.cols() || jb.u.rows() != jb.lambda1.size() ||
      jb.lambda1.size() != jb.lambda2.size())
    throw ValidationError(path + ": inconsistent basis shapes");
  return jb;
}

CcoProblem read_problem_json(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("graph1") || !j.contains("graph2"))
    throw ValidationError(path + ": needs fields graph1 and graph2");
  const WeightedGraph g1 = graph_from_json(j["graph1"], path);
  const WeightedGraph g2 = graph_from_json(j["graph2"], path);
  PatternMode mode = PatternMode::own;
  if (j.contains("pattern")) {
    const std::string p = j["pattern"].get<std::string>();
    if (p == "own")
      mode = PatternMode::own;
    else if (p == "union" || p == "unite")
      mode = PatternMode::unite;
    else
      throw ValidationError(path + ": pattern must be own or union");
  }
  const double alpha = j.value("alpha", 1e6);
  OptSettings opt;
  if (j.contains("opt")) {
    const json& o = j["opt"];
    opt.max_iters = o.value("max_iters", opt.max_iters);
    opt.armijo_sigma = o.value("armijo_sigma", opt.armijo_sigma);
    opt.armijo_beta = o.value("armijo_beta", opt.armijo_beta);
    opt.grad_tol = o.value("grad_tol", opt.grad_tol);
    opt.cg_restart = o.value("cg_restart", opt.cg_restart);
  }
  return make_problem(g1, g2, mode, alpha, opt);
}

void write_result_json(const std::string& path, const CcoProblem& p,
                       const CcoResult& r) {
  json history = json::array();
  for (const auto& h : r.history)
    history.push_back({{"cost", h.cost},
                       {"distance", h.distance_term},
                       {"commutator", h.commutator_term},
                       {"step", h.step}});
  dump_to(path,
          json{{"alpha", p.alpha},
               {"converged", r.converged},
               {"iterations", r.iterations},
               {"grad_inf_norm", r.grad_inf_norm},
               {"commutator_frob", r.commutator_frob},
               {"graph1", graph_to_json(graph_from_weights(
                              r.lt1.n(), r.lt1.pattern, r.u1))},
               {"graph2", graph_to_json(graph_from_weights(
                              r.lt2.n(), r.lt2.pattern, r.u2))},
               {"history", std::move(history)}});
}

void write_correspondence_json(const std::string& path,
                               const FunctionalCorrespondence& fc,
                               const std::vector<IndexPair>& landmarks) {
  json lm = json::array();
  for (const auto& [a, b] : landmarks) lm.push_back({a, b});
  dump_to(path, json{{"m", static_cast<int>(fc.c.rows())},
                     {"C", matrix_to_json(fc.c)},
                     {"landmarks", std::move(lm)}});
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  auto f = open_out(path);
  f << "index,label\n";
  for (size_t i = 0; i < labels.size(); ++i) f << i << ',' << labels[i] << '\n';
}

}  // namespace ccolap
