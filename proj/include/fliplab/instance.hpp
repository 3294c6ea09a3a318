#pragma once

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fliplab/numeric.hpp"
#include "fliplab/rng.hpp"

namespace fliplab {

/// Undirected graph topology. Node ids are 1-based; edge ids are assigned in
/// input order and are the canonical index space for improvement vectors.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw ValidationError("node count must be nonnegative");
    adj_.assign(n_ + 1, {});
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
      auto& [u, v] = edges_[id];
      if (u < 1 || u > n_ || v < 1 || v > n_)
        throw ValidationError("edge endpoint out of range");
      if (u == v) throw ValidationError("self-loop not allowed");
      if (u > v) std::swap(u, v);
      auto [it, inserted] = edge_ids_.emplace(key(u, v), id);
      if (!inserted) throw ValidationError("duplicate edge");
      adj_[u].push_back({v, id});
      adj_[v].push_back({u, id});
    }
  }

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// -1 when (u,v) is not an edge.
  int edge_id(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = edge_ids_.find(key(u, v));
    return it == edge_ids_.end() ? -1 : it->second;
  }
  bool adjacent(int u, int v) const { return edge_id(u, v) >= 0; }

  /// Neighbors of u as (node, edge id) pairs, in edge input order.
  const std::vector<std::pair<int, int>>& neighbors(int u) const {
    if (u < 1 || u > n_) throw ValidationError("node id out of range");
    return adj_[u];
  }

  static Graph complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) e.push_back({u, v});
    return Graph(n, std::move(e));
  }

  static Graph erdos_renyi(int n, double p, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v)
        if (rng.next_double() < p) e.push_back({u, v});
    return Graph(n, std::move(e));
  }

  /// Cycle plus random chords, rejecting any edge that would push a node past
  /// max_degree. Keeps the instance family connected and degree-bounded.
  static Graph bounded_degree(int n, int max_degree, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    std::vector<int> deg(n + 1, 0);
    if (n >= 3) {
      for (int u = 1; u <= n; ++u) {
        int v = u % n + 1;
        e.push_back({std::min(u, v), std::max(u, v)});
        ++deg[u];
        ++deg[v];
      }
    }
    int attempts = 4 * n;
    while (attempts-- > 0) {
      int u = rng.next_int(1, n), v = rng.next_int(1, n);
      if (u == v || deg[u] >= max_degree || deg[v] >= max_degree) continue;
      int a = std::min(u, v), b = std::max(u, v);
      if (std::any_of(e.begin(), e.end(),
                      [&](auto& p) { return p.first == a && p.second == b; }))
        continue;
      e.push_back({a, b});
      ++deg[a];
      ++deg[b];
    }
    return Graph(n, std::move(e));
  }

 private:
  static std::uint64_t key(int u, int v) {
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  }
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::unordered_map<std::uint64_t, int> edge_ids_;
};

/// Uniform-interval distribution on [lo,hi] with density 1/(hi-lo).
/// The density bound is the only property any statement uses, so this is the
/// minimal family achieving any phi >= 1/2.
struct DistributionSpec {
  double lo;
  double hi;

  DistributionSpec(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo >= -1.0 && lo < hi && hi <= 1.0))
      throw ValidationError("distribution requires -1 <= lo < hi <= 1");
  }
  double density() const { return 1.0 / (hi - lo); }
  double sample(Rng& rng) const { return rng.uniform(lo, hi); }
};

/// Node-sign assignment in {-1,+1}, possibly partial. Lookups outside the
/// domain of definition are errors.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(int n) : signs_(n + 1, 0) {}

  static Configuration constant(int n, int sign) {
    Configuration c(n);
    for (int v = 1; v <= n; ++v) c.set(v, sign);
    return c;
  }

  static Configuration random(int n, Rng& rng) {
    Configuration c(n);
    for (int v = 1; v <= n; ++v) c.set(v, rng.next_u64() & 1 ? 1 : -1);
    return c;
  }

  int size() const { return static_cast<int>(signs_.size()) - 1; }

  bool defined(int v) const {
    return v >= 1 && v < static_cast<int>(signs_.size()) && signs_[v] != 0;
  }

  int sign(int v) const {
    if (!defined(v)) throw ValidationError("configuration lookup outside its domain");
    return signs_[v];
  }

  void set(int v, int sign) {
    if (v < 1) throw ValidationError("node id out of range");
    if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
    if (v >= static_cast<int>(signs_.size())) signs_.resize(v + 1, 0);
    signs_[v] = static_cast<std::int8_t>(sign);
  }

  void flip(int v) { signs_[v] = static_cast<std::int8_t>(-sign(v)); }

  bool total(int n) const {
    for (int v = 1; v <= n; ++v)
      if (!defined(v)) return false;
    return true;
  }

  bool operator==(const Configuration& o) const = default;

 private:
  std::vector<std::int8_t> signs_;  // 0 = undefined
};

/// Weighted instance: topology, per-edge weights in [-1,1], and optional
/// per-edge distribution specs for smoothed sampling. W is double in
/// simulation mode and Rational in exact verification mode.
template <typename W>
struct InstanceT {
  Graph graph;
  std::vector<W> weights;
  std::vector<std::optional<DistributionSpec>> dists;

  InstanceT() = default;
  InstanceT(Graph g, std::vector<W> w,
            std::vector<std::optional<DistributionSpec>> d = {})
      : graph(std::move(g)), weights(std::move(w)), dists(std::move(d)) {
    if (static_cast<int>(weights.size()) != graph.edge_count())
      throw ValidationError("weight count must equal edge count");
    if (!dists.empty() && static_cast<int>(dists.size()) != graph.edge_count())
      throw ValidationError("distribution count must equal edge count");
    for (const W& w : weights)
      if (w < W(-1) || w > W(1)) throw ValidationError("edge weight outside [-1,1]");
  }

  int node_count() const { return graph.node_count(); }
};

using WeightedInstance = InstanceT<double>;
using RationalInstance = InstanceT<Rational>;

template <typename W>
W cut_weight(const InstanceT<W>& inst, const Configuration& cfg) {
  if (!cfg.total(inst.node_count()))
    throw ValidationError("cut_weight requires a total configuration");
  W total(0);
  const auto& edges = inst.graph.edges();
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    if (cfg.sign(edges[e].first) != cfg.sign(edges[e].second)) total += inst.weights[e];
  return total;
}

/// Gain in cut weight from flipping v, computed locally:
/// sum over incident edges of X_(v,u) * cfg(v) * cfg(u).
template <typename W>
W flip_gain(const InstanceT<W>& inst, const Configuration& cfg, int v) {
  W total(0);
  for (auto [u, e] : inst.graph.neighbors(v))
    total += inst.weights[e] * W(cfg.sign(v) * cfg.sign(u));
  return total;
}

/// Independent per-edge draw from each edge's spec; pure function of seed.
inline WeightedInstance sample_weights(const WeightedInstance& inst, std::uint64_t seed) {
  if (inst.dists.empty()) throw ValidationError("sample_weights requires distribution specs");
  std::vector<double> w(inst.graph.edge_count());
  for (int e = 0; e < inst.graph.edge_count(); ++e) {
    if (!inst.dists[e]) throw ValidationError("edge is missing its distribution spec");
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(e)));
    w[e] = inst.dists[e]->sample(rng);
  }
  return WeightedInstance(inst.graph, std::move(w), inst.dists);
}

}  // namespace fliplab
