#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "oracles.hpp"

#include "fliplab/io.hpp"

using namespace fliplab;

TEST_CASE("instance JSON round trip") {
  Graph g(3, {{1, 2}, {1, 3}, {2, 3}});
  std::vector<std::optional<DistributionSpec>> dists(3, DistributionSpec(-0.5, 0.5));
  WeightedInstance inst(g, {0.5, -0.2, 0.3}, dists);
  WeightedInstance back = instance_from_json(instance_to_json(inst));
  CHECK(back.graph.node_count() == 3);
  CHECK(back.graph.edges() == inst.graph.edges());
  CHECK(back.weights == inst.weights);
  REQUIRE(back.dists.size() == 3);
  CHECK(back.dists[0]->lo == -0.5);

  // weights optional, default zero
  WeightedInstance zero = instance_from_json(json{{"n", 2}, {"edges", {{1, 2}}}});
  CHECK(zero.weights == std::vector<double>{0.0});

  CHECK_THROWS_AS(instance_from_json(json{{"edges", json::array()}}), ValidationError);
  CHECK_THROWS_AS(instance_from_json(json{{"n", 2}, {"edges", {{1, 1}}}}), ValidationError);
}

TEST_CASE("trace JSON round trip") {
  Graph g(3, {{1, 2}, {1, 3}, {2, 3}});
  WeightedInstance inst(g, {0.5, -0.2, 0.3});
  FlipTrace tr = run_flip(inst, Configuration::constant(3, 1), PivotRule::BestImprovement,
                          default_step_cap(3), 0);
  FlipTrace back = trace_from_json(trace_to_json(tr));
  CHECK(back.initial == tr.initial);
  CHECK(back.moves == tr.moves);
  CHECK(back.gains == tr.gains);
  CHECK(back.terminated == tr.terminated);
  CHECK(back.final_cfg == tr.final_cfg);  // reconstructed by replay

  CHECK_THROWS_AS(
      trace_from_json(json{{"initial", {1}}, {"moves", {1, 1}}, {"gains", {0.1}},
                           {"terminated", true}}),
      ValidationError);
}

TEST_CASE("certificate JSON round trip") {
  Graph g = Graph::complete(3);
  MoveSequence seq({1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3});
  Configuration gamma = Configuration::constant(3, 1);
  ExtractionCertificate cert = extract(seq, gamma, g);
  ExtractionCertificate back = certificate_from_json(certificate_to_json(cert));
  CHECK(back.case_tag == cert.case_tag);
  CHECK(back.b_indices == cert.b_indices);
  CHECK(back.q_arcs == cert.q_arcs);
  CHECK(back.sources == cert.sources);
  CHECK(back.rank == cert.rank);
  CHECK(back.tau == cert.tau);
  CHECK(check_certificate(seq, gamma, back, g));

  CHECK_THROWS_AS(certificate_from_json(json{{"case", "9"}}), ValidationError);
}

TEST_CASE("BFOP JSON round trip") {
  std::vector<BFOPInstance::Binary> bins{{1, 2, BinaryTable{{{0, 1}, {1, 0}}}, 0.75}};
  std::vector<BFOPInstance::Unary> uns{{2, UnaryTable{-1, 1}, 0.25}};
  BFOPInstance inst(2, bins, uns);
  BFOPInstance back = bfop_from_json(bfop_to_json(inst));
  CHECK(back.n == 2);
  REQUIRE(back.binary.size() == 1);
  CHECK(back.binary[0].table == inst.binary[0].table);
  CHECK(back.binary[0].weight == 0.75);
  REQUIRE(back.unary.size() == 1);
  CHECK(back.unary[0].table == inst.unary[0].table);
  CHECK_THROWS_AS(bfop_from_json(json{{"binary", json::array()}}), ValidationError);
}

TEST_CASE("weighted 2-CNF reader") {
  std::istringstream in(
      "c a comment\n"
      "p wcnf 3 3\n"
      "1.5 1 -2 0\n"
      "0.5 -3 0\n"
      "2 2 3 0\n");
  auto [n, clauses] = read_wcnf(in);
  CHECK(n == 3);
  REQUIRE(clauses.size() == 3);
  CHECK(clauses[0].lit1 == 1);
  CHECK(clauses[0].lit2 == -2);
  CHECK(clauses[0].weight == 1.5);
  CHECK(clauses[1].lit1 == -3);
  CHECK(clauses[1].lit2 == 0);
  CHECK(clauses[1].weight == 0.5);

  std::istringstream plain("p cnf 2 1\n1 2 0\n");
  auto [n2, c2] = read_wcnf(plain);
  CHECK(n2 == 2);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].weight == 1.0);

  std::istringstream bad("1 2 0\n");
  CHECK_THROWS_AS(read_wcnf(bad), ValidationError);
  std::istringstream toolong("p cnf 3 1\n1 2 3 0\n");
  CHECK_THROWS_AS(read_wcnf(toolong), ValidationError);
  std::istringstream range("p cnf 2 1\n1 5 0\n");
  CHECK_THROWS_AS(read_wcnf(range), ValidationError);
}

TEST_CASE("CSV emitters") {
  HardInstance hi = build_hard(2, 2, 8);
  std::string csv = substring_csv(scan_substrings(hi, ScanMode::BlockAligned));
  CHECK(csv.rfind("start,length,rank,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 1);

  Graph g(2, {{1, 2}});
  MoveSequence seq({1, 2, 1});
  std::string mat = arc_matrix_csv(seq, find_arcs(seq), default_config(seq), g);
  CHECK(mat == "edge_id,arc0\n0,2\n");
}

TEST_CASE("file helpers") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/path.json"), ValidationError);
  std::string tmp = "/tmp/fliplab_io_test.json";
  write_text_file(tmp, "{\"n\": 2, \"edges\": [[1,2]]}");
  json j = parse_json_file(tmp);
  CHECK(j.at("n") == 2);
  write_text_file(tmp, "{broken");
  CHECK_THROWS_AS(parse_json_file(tmp), ValidationError);
}
