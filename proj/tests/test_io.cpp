#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccolap/cco.hpp"
#include "ccolap/datasets.hpp"
#include "ccolap/io.hpp"
#include "ccolap/jade.hpp"
#include "ccolap/laplacian.hpp"

using namespace ccolap;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* tag) {
    path = std::filesystem::temp_directory_path() /
           (std::string("ccolap_io_") + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

void spit(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  REQUIRE(bool(f));
  f << text;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("doubles survive the text round trip") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 7.0, 0.0, 1e17 + 1}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("points csv round trips bitwise") {
  TempDir tmp("points");
  Eigen::MatrixXd m(3, 2);
  m << 0.1, -2.5, 1.0 / 3.0, 4e-17, 5.0, -0.0;
  write_matrix_csv(tmp.file("m.csv"), m);
  const Eigen::MatrixXd back = read_points_csv(tmp.file("m.csv"));
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 2);
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("points csv accepts a header line and rejects damage") {
  TempDir tmp("badpoints");
  spit(tmp.file("h.csv"), "x,y\n1.5,2\n3,4\n");
  const Eigen::MatrixXd m = read_points_csv(tmp.file("h.csv"));
  CHECK(m.rows() == 2);
  CHECK(m(0, 0) == 1.5);
  spit(tmp.file("ragged.csv"), "1,2\n3\n");
  CHECK_THROWS_AS(read_points_csv(tmp.file("ragged.csv")), ValidationError);
  spit(tmp.file("word.csv"), "1,2\n3,four\n");
  CHECK_THROWS_AS(read_points_csv(tmp.file("word.csv")), ValidationError);
  spit(tmp.file("empty.csv"), "");
  CHECK_THROWS_AS(read_points_csv(tmp.file("empty.csv")), ValidationError);
  CHECK_THROWS_AS(read_points_csv(tmp.file("missing.csv")), ValidationError);
}

TEST_CASE("edge csv and graph json round trip a graph") {
  TempDir tmp("graph");
  const WeightedGraph g =
      make_graph(4, {{0, 1, 0.25}, {1, 2, 1.0 / 3.0}, {2, 3, 1e-9}});
  write_edge_csv(tmp.file("g.csv"), g);
  const WeightedGraph back = read_edge_csv(tmp.file("g.csv"));
  REQUIRE(back.edges.size() == 3);
  CHECK(back.n == 4);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back.edges[i].i == g.edges[i].i);
    CHECK(back.edges[i].j == g.edges[i].j);
    CHECK(back.edges[i].w == g.edges[i].w);
  }
  write_graph_json(tmp.file("g.json"), g);
  const WeightedGraph jback = read_graph_json(tmp.file("g.json"));
  CHECK(jback.n == 4);
  REQUIRE(jback.edges.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(jback.edges[i].w == g.edges[i].w);
}

TEST_CASE("graph json validates its shape") {
  TempDir tmp("badgraph");
  spit(tmp.file("noedges.json"), "{\"n\": 3}");
  CHECK_THROWS_AS(read_graph_json(tmp.file("noedges.json")), ValidationError);
  spit(tmp.file("badedge.json"), "{\"n\": 3, \"edges\": [[0, 1]]}");
  CHECK_THROWS_AS(read_graph_json(tmp.file("badedge.json")), ValidationError);
  spit(tmp.file("loop.json"), "{\"n\": 3, \"edges\": [[1, 1, 0.5]]}");
  CHECK_THROWS_AS(read_graph_json(tmp.file("loop.json")), ValidationError);
  spit(tmp.file("syntax.json"), "{\"n\": 3,");
  CHECK_THROWS_AS(read_graph_json(tmp.file("syntax.json")), ValidationError);
}

TEST_CASE("joint basis json round trips bitwise") {
  TempDir tmp("basis");
  const auto [l1, l2] = gen_random_laplacian_pair(6, 12);
  const JointBasis jb = jade(l1.m, l2.m);
  write_joint_basis_json(tmp.file("jb.json"), jb);
  const JointBasis back = read_joint_basis_json(tmp.file("jb.json"));
  CHECK(back.residual == jb.residual);
  CHECK(back.sweeps == jb.sweeps);
  CHECK((back.u - jb.u).norm() == 0.0);
  CHECK((back.lambda1 - jb.lambda1).norm() == 0.0);
  CHECK((back.lambda2 - jb.lambda2).norm() == 0.0);
}

TEST_CASE("problem json carries graphs, pattern and options") {
  TempDir tmp("problem");
  spit(tmp.file("p.json"), R"({
    "graph1": {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 0.5]]},
    "graph2": {"n": 3, "edges": [[0, 2, 0.25]]},
    "pattern": "union",
    "alpha": 125.0,
    "opt": {"max_iters": 17, "grad_tol": 1e-6}
  })");
  const CcoProblem p = read_problem_json(tmp.file("p.json"));
  CHECK(p.alpha == 125.0);
  CHECK(p.opt.max_iters == 17);
  CHECK(p.opt.grad_tol == 1e-6);
  CHECK(p.opt.cg_restart == OptSettings{}.cg_restart);
  // union pattern: both sides may use all three edges
  CHECK(p.pattern1.size() == 3);
  CHECK(p.pattern2.size() == 3);
  spit(tmp.file("bad.json"), R"({
    "graph1": {"n": 3, "edges": [[0, 1, 1.0]]},
    "graph2": {"n": 3, "edges": [[0, 2, 0.25]]},
    "pattern": "diagonal"
  })");
  CHECK_THROWS_AS(read_problem_json(tmp.file("bad.json")), ValidationError);
}

TEST_CASE("result json records the solved graphs") {
  TempDir tmp("result");
  const auto [l1, l2] = gen_random_laplacian_pair(5, 3);
  const CcoProblem p = make_problem(l1, l2, PatternMode::own, 10.0);
  const CcoResult r = cco_solve(p);
  write_result_json(tmp.file("r.json"), p, r);
  std::ifstream f(tmp.file("r.json"));
  const nlohmann::json j = nlohmann::json::parse(f);
  CHECK(j["alpha"].get<double>() == 10.0);
  CHECK(j["iterations"].get<int>() == r.iterations);
  CHECK(j["graph1"]["n"].get<int>() == 5);
  CHECK(j["graph1"]["edges"].size() == p.pattern1.size());
  CHECK(j["history"].size() == r.history.size());
}

TEST_CASE("correspondence json lists landmarks") {
  TempDir tmp("corr");
  const FunctionalCorrespondence fc = FunctionalCorrespondence::identity(4);
  write_correspondence_json(tmp.file("c.json"), fc, {{0, 0}, {2, 2}});
  std::ifstream f(tmp.file("c.json"));
  const nlohmann::json j = nlohmann::json::parse(f);
  CHECK(j["m"].get<int>() == 4);
  CHECK(j["C"].size() == 4);
  REQUIRE(j["landmarks"].size() == 2);
  CHECK(j["landmarks"][1][0].get<int>() == 2);
}

TEST_CASE("labels csv is plain and ordered") {
  TempDir tmp("labels");
  write_labels_csv(tmp.file("l.csv"), {2, 0, 1});
  std::ifstream f(tmp.file("l.csv"));
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "index,label\n0,2\n1,0\n2,1\n");
}

TEST_SUITE_END();
