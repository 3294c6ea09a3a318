#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"

using namespace fliplab;

namespace {

WeightedInstance k3() {
  Graph g(3, {{1, 2}, {1, 3}, {2, 3}});
  return WeightedInstance(g, {0.5, -0.2, 0.3});
}

Configuration cfg3(int a, int b, int c) {
  Configuration cfg(3);
  cfg.set(1, a);
  cfg.set(2, b);
  cfg.set(3, c);
  return cfg;
}

}  // namespace

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(Graph(2, {{1, 1}}), ValidationError);           // self loop
  CHECK_THROWS_AS(Graph(2, {{1, 2}, {2, 1}}), ValidationError);   // duplicate
  CHECK_THROWS_AS(Graph(2, {{1, 3}}), ValidationError);           // out of range
  Graph g(3, {{2, 1}});
  CHECK(g.edge_id(1, 2) == 0);
  CHECK(g.edge_id(2, 1) == 0);
  CHECK(g.edge_id(1, 3) == -1);
  CHECK(g.adjacent(1, 2));
}

TEST_CASE("distribution spec invariants") {
  CHECK_THROWS_AS(DistributionSpec(0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(DistributionSpec(-1.5, 0.0), ValidationError);
  CHECK_THROWS_AS(DistributionSpec(0.0, 1.5), ValidationError);
  DistributionSpec d(-1.0, 1.0);
  CHECK(d.density() == doctest::Approx(0.5));
}

TEST_CASE("cut weight on K3") {
  auto inst = k3();
  CHECK(cut_weight(inst, cfg3(1, 1, 1)) == doctest::Approx(0.0));
  CHECK(cut_weight(inst, cfg3(1, -1, 1)) == doctest::Approx(0.8));
  CHECK(cut_weight(inst, cfg3(-1, 1, -1)) == doctest::Approx(0.8));  // global sign flip
  // 0.8 is the global maximum over all 8 configurations
  double best = -10;
  for (int mask = 0; mask < 8; ++mask)
    best = std::max(best, cut_weight(inst, cfg3(mask & 1 ? 1 : -1, mask & 2 ? 1 : -1,
                                                mask & 4 ? 1 : -1)));
  CHECK(best == doctest::Approx(0.8));
  Configuration partial(3);
  partial.set(1, 1);
  CHECK_THROWS_AS(cut_weight(inst, partial), ValidationError);
}

TEST_CASE("flip gain on K3") {
  auto inst = k3();
  CHECK(flip_gain(inst, cfg3(1, 1, 1), 2) == doctest::Approx(0.8));
  CHECK(flip_gain(inst, cfg3(1, -1, 1), 2) == doctest::Approx(-0.8));  // involution
  // isolated node
  Graph g(2, {});
  WeightedInstance iso(g, {});
  Configuration cfg(2);
  cfg.set(1, 1);
  cfg.set(2, -1);
  CHECK(flip_gain(iso, cfg, 1) == 0.0);
}

TEST_CASE("exact-mode identities on random instances") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = rng.next_int(2, 8);
    Graph g = Graph::erdos_renyi(n, 0.6, rng);
    RationalInstance inst = oracles::random_rational_instance(g, rng);
    Configuration cfg = Configuration::random(n, rng);
    // global sign flip preserves cut exactly
    Configuration flipped = cfg;
    for (int v = 1; v <= n; ++v) flipped.flip(v);
    CHECK(cut_weight(inst, cfg) == cut_weight(inst, flipped));
    for (int v = 1; v <= n; ++v) {
      Rational gain = flip_gain(inst, cfg, v);
      Configuration after = cfg;
      after.flip(v);
      // cut delta identity, exact
      CHECK(cut_weight(inst, after) == cut_weight(inst, cfg) + gain);
      // involution
      CHECK(flip_gain(inst, after, v) == -gain);
    }
  }
}

TEST_CASE("sample_weights determinism and support") {
  Rng rng(5);
  Graph g = Graph::complete(6);
  std::vector<std::optional<DistributionSpec>> dists(g.edge_count(),
                                                     DistributionSpec(0.5, 0.6));
  WeightedInstance base(g, std::vector<double>(g.edge_count(), 0.0), dists);
  WeightedInstance a = sample_weights(base, 42);
  WeightedInstance b = sample_weights(base, 42);
  CHECK(a.weights == b.weights);
  for (double w : a.weights) {
    CHECK(w >= 0.5);
    CHECK(w <= 0.6);
  }
  WeightedInstance c = sample_weights(base, 43);
  CHECK(a.weights != c.weights);
  // missing spec refused
  WeightedInstance nodists(g, std::vector<double>(g.edge_count(), 0.0));
  CHECK_THROWS_AS(sample_weights(nodists, 1), ValidationError);
}

TEST_CASE("sampled mean within standard-error bound") {
  const int N = 100000;
  DistributionSpec d(-1.0, 1.0);
  Rng rng(123);
  double sum = 0;
  for (int i = 0; i < N; ++i) sum += d.sample(rng);
  double sigma = std::sqrt(1.0 / 3.0);  // variance of uniform(-1,1)
  CHECK(std::abs(sum / N) <= 3 * sigma / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("weight range enforced") {
  Graph g(2, {{1, 2}});
  CHECK_THROWS_AS(WeightedInstance(g, {1.5}), ValidationError);
  CHECK_THROWS_AS(WeightedInstance(g, {0.1, 0.2}), ValidationError);
}
