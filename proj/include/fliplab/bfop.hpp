#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fliplab/arcs.hpp"
#include "fliplab/flip.hpp"
#include "fliplab/numeric.hpp"
#include "fliplab/rng.hpp"

namespace fliplab {

using BinaryTable = std::array<std::array<int, 2>, 2>;  // table[x][y]
using UnaryTable = std::array<int, 2>;

/// f is a sum of two unary functions iff the diagonal sums agree.
inline bool is_separable(const BinaryTable& f) {
  return f[0][0] + f[1][1] == f[0][1] + f[1][0];
}

/// Split a separable f(x,y) into f'(x) + f''(y).
inline std::pair<UnaryTable, UnaryTable> separate(const BinaryTable& f) {
  if (!is_separable(f)) throw ValidationError("cannot separate a nonseparable table");
  UnaryTable fx{f[0][0], f[1][0]};
  UnaryTable fy{0, f[0][1] - f[0][0]};
  return {fx, fy};
}

/// Assignment over {0,1}; index 0 unused, variables are 1-based.
using Assignment = std::vector<int>;

inline Assignment random_assignment(int n, Rng& rng) {
  Assignment a(n + 1, 0);
  for (int v = 1; v <= n; ++v) a[v] = static_cast<int>(rng.next_u64() & 1);
  return a;
}

/// Weighted unary/binary functions over {0,1} variables. Separable binary
/// tables are decomposed into unary parts at construction, so the stored
/// binary functions are all nonseparable. Function tables are integers;
/// randomness lives only in the weights.
template <typename W>
struct BFOPInstanceT {
  struct Unary {
    int var;
    UnaryTable table;
    W weight;
  };
  struct Binary {
    int x, y;
    BinaryTable table;
    W weight;
  };

  int n = 0;
  std::vector<Unary> unary;
  std::vector<Binary> binary;

  BFOPInstanceT() = default;
  BFOPInstanceT(int n_, std::vector<Binary> raw_binary, std::vector<Unary> raw_unary = {})
      : n(n_) {
    if (n < 0) throw ValidationError("variable count must be nonnegative");
    for (auto& u : raw_unary) {
      if (u.var < 1 || u.var > n) throw ValidationError("unary variable out of range");
      unary.push_back(u);
    }
    for (auto& b : raw_binary) {
      if (b.x < 1 || b.x > n || b.y < 1 || b.y > n)
        throw ValidationError("binary variable out of range");
      if (b.x == b.y) throw ValidationError("binary function needs distinct variables");
      if (is_separable(b.table)) {
        auto [fx, fy] = separate(b.table);
        unary.push_back({b.x, fx, b.weight});
        unary.push_back({b.y, fy, b.weight});
      } else {
        binary.push_back(b);
      }
    }
    unary_of_.assign(n + 1, {});
    binary_of_.assign(n + 1, {});
    for (int i = 0; i < static_cast<int>(unary.size()); ++i)
      unary_of_[unary[i].var].push_back(i);
    for (int i = 0; i < static_cast<int>(binary.size()); ++i) {
      binary_of_[binary[i].x].push_back(i);
      binary_of_[binary[i].y].push_back(i);
    }
  }

  const std::vector<int>& unary_of(int v) const { return unary_of_[v]; }
  const std::vector<int>& binary_of(int v) const { return binary_of_[v]; }

 private:
  std::vector<std::vector<int>> unary_of_;
  std::vector<std::vector<int>> binary_of_;
};

using BFOPInstance = BFOPInstanceT<double>;
using RationalBFOPInstance = BFOPInstanceT<Rational>;

template <typename W>
void validate_assignment(const BFOPInstanceT<W>& inst, const Assignment& a) {
  if (static_cast<int>(a.size()) != inst.n + 1)
    throw ValidationError("assignment size must be n+1 (1-based)");
  for (int v = 1; v <= inst.n; ++v)
    if (a[v] != 0 && a[v] != 1) throw ValidationError("assignment values must be 0 or 1");
}

template <typename W>
W bfop_objective(const BFOPInstanceT<W>& inst, const Assignment& a) {
  validate_assignment(inst, a);
  W total(0);
  for (const auto& u : inst.unary) total += u.weight * W(u.table[a[u.var]]);
  for (const auto& b : inst.binary) total += b.weight * W(b.table[a[b.x]][a[b.y]]);
  return total;
}

/// Objective delta from flipping x, computed from the functions touching x.
template <typename W>
W bfop_flip_gain(const BFOPInstanceT<W>& inst, const Assignment& a, int x) {
  validate_assignment(inst, a);
  if (x < 1 || x > inst.n) throw ValidationError("variable out of range");
  W total(0);
  for (int i : inst.unary_of(x)) {
    const auto& u = inst.unary[i];
    total += u.weight * W(u.table[1 - a[x]] - u.table[a[x]]);
  }
  for (int i : inst.binary_of(x)) {
    const auto& b = inst.binary[i];
    int vx = a[b.x], vy = a[b.y];
    int nx = b.x == x ? 1 - vx : vx;
    int ny = b.y == x ? 1 - vy : vy;
    total += b.weight * W(b.table[nx][ny] - b.table[vx][vy]);
  }
  return total;
}

template <typename W>
struct BFOPTraceT {
  Assignment initial;
  std::vector<int> moves;
  std::vector<W> gains;
  Assignment final_assignment;
  bool terminated = false;
  std::int64_t steps = 0;
};

using BFOPTrace = BFOPTraceT<double>;

template <typename W>
bool bfop_is_local_optimum(const BFOPInstanceT<W>& inst, const Assignment& a) {
  const W eps = NumericTraits<W>::gain_epsilon();
  for (int v = 1; v <= inst.n; ++v)
    if (bfop_flip_gain(inst, a, v) > eps) return false;
  return true;
}

/// Asynchronous better-response dynamics over the BFOP objective, with the
/// same pivot rules and tie-breaking as the cut engine.
template <typename W>
BFOPTraceT<W> run_flip_bfop(const BFOPInstanceT<W>& inst, const Assignment& init,
                            PivotRule rule, std::int64_t step_cap, std::uint64_t seed) {
  validate_assignment(inst, init);
  if (step_cap < 0) throw ValidationError("step_cap must be nonnegative");
  const W eps = NumericTraits<W>::gain_epsilon();
  Rng rng(seed);
  BFOPTraceT<W> trace;
  trace.initial = init;
  Assignment a = init;
  std::vector<int> improving;
  while (trace.steps < step_cap) {
    int chosen = 0;
    W chosen_gain(0);
    switch (rule) {
      case PivotRule::FirstImprovement:
        for (int v = 1; v <= inst.n; ++v) {
          W g = bfop_flip_gain(inst, a, v);
          if (g > eps) {
            chosen = v;
            chosen_gain = g;
            break;
          }
        }
        break;
      case PivotRule::BestImprovement:
        for (int v = 1; v <= inst.n; ++v) {
          W g = bfop_flip_gain(inst, a, v);
          if (g > eps && (chosen == 0 || g > chosen_gain)) {
            chosen = v;
            chosen_gain = g;
          }
        }
        break;
      case PivotRule::RandomImprovement:
        improving.clear();
        for (int v = 1; v <= inst.n; ++v)
          if (bfop_flip_gain(inst, a, v) > eps) improving.push_back(v);
        if (!improving.empty()) {
          chosen = improving[rng.next_below(improving.size())];
          chosen_gain = bfop_flip_gain(inst, a, chosen);
        }
        break;
    }
    if (chosen == 0) {
      trace.terminated = true;
      break;
    }
    a[chosen] = 1 - a[chosen];
    trace.moves.push_back(chosen);
    trace.gains.push_back(chosen_gain);
    ++trace.steps;
  }
  if (trace.steps == step_cap && !trace.terminated)
    trace.terminated = bfop_is_local_optimum(inst, a);
  trace.final_assignment = a;
  return trace;
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

/// Weighted 2-CNF clause; literals are signed 1-based variables, lit2 == 0
/// marks a unary clause.
struct Clause {
  int lit1 = 0;
  int lit2 = 0;
  double weight = 1.0;
};

/// BFOP whose objective is the satisfied-clause weight.
inline BFOPInstance reduce_max2sat(int n, const std::vector<Clause>& clauses) {
  std::vector<BFOPInstance::Binary> bins;
  std::vector<BFOPInstance::Unary> uns;
  auto sat = [](int lit, int value) { return lit > 0 ? value == 1 : value == 0; };
  for (const Clause& c : clauses) {
    if (c.lit1 == 0) throw ValidationError("clause needs at least one literal");
    int v1 = std::abs(c.lit1);
    if (c.lit2 == 0) {
      UnaryTable t{sat(c.lit1, 0) ? 1 : 0, sat(c.lit1, 1) ? 1 : 0};
      uns.push_back({v1, t, c.weight});
      continue;
    }
    int v2 = std::abs(c.lit2);
    BinaryTable t;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) t[x][y] = (sat(c.lit1, x) || sat(c.lit2, y)) ? 1 : 0;
    bins.push_back({v1, v2, t, c.weight});
  }
  return BFOPInstance(n, std::move(bins), std::move(uns));
}

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

/// BFOP whose objective is the weight of edges directed from the 0-side to
/// the 1-side (the singleton relation {(0,1)}).
inline BFOPInstance reduce_directed_cut(int n, const std::vector<WeightedEdge>& edges) {
  std::vector<BFOPInstance::Binary> bins;
  for (const WeightedEdge& e : edges) {
    BinaryTable t{{{0, 1}, {0, 0}}};
    bins.push_back({e.u, e.v, t, e.weight});
  }
  return BFOPInstance(n, std::move(bins));
}

/// Hopfield network with states {-1,+1} encoded by 0 <-> -1. The objective
/// equals the potential p = sum t_u g(u) + sum w_uv g(u) g(v), so a node is
/// unstable exactly when its flip gain is positive.
inline BFOPInstance reduce_hopfield(int n, const std::vector<WeightedEdge>& edges,
                                    const std::vector<double>& thresholds) {
  if (static_cast<int>(thresholds.size()) != n + 1)
    throw ValidationError("thresholds must be 1-based of size n+1");
  std::vector<BFOPInstance::Binary> bins;
  std::vector<BFOPInstance::Unary> uns;
  for (int u = 1; u <= n; ++u) uns.push_back({u, UnaryTable{-1, 1}, thresholds[u]});
  for (const WeightedEdge& e : edges) {
    BinaryTable t{{{1, -1}, {-1, 1}}};
    bins.push_back({e.u, e.v, t, e.weight});
  }
  return BFOPInstance(n, std::move(bins), std::move(uns));
}

inline int hopfield_state(const Assignment& a, int v) { return a[v] == 1 ? 1 : -1; }

struct CoordinationEdge {
  int u = 0;
  int v = 0;
  std::array<std::array<double, 2>, 2> payoff{};  // payoff[strategy_u][strategy_v]
};

/// Network coordination game as four singleton-relation functions per edge;
/// the objective is the total payoff and FLIP is better-response dynamics.
inline BFOPInstance reduce_coordination(int n, const std::vector<CoordinationEdge>& edges) {
  std::vector<BFOPInstance::Binary> bins;
  for (const CoordinationEdge& e : edges)
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        BinaryTable t{{{0, 0}, {0, 0}}};
        t[p][q] = 1;
        bins.push_back({e.u, e.v, t, e.payoff[p][q]});
      }
  return BFOPInstance(n, std::move(bins));
}

// ---------------------------------------------------------------------------
// The function-by-arc matrix
// ---------------------------------------------------------------------------

/// Columns of the matrix whose rows are the nonseparable binary functions and
/// whose columns are the arcs of seq: the entry for function f and an arc of
/// variable x is nonzero iff f touches x and f's other variable appears an odd
/// number of times inside the arc; its value is +-(f00+f11-f01-f10), positive
/// exactly when the two variables differ just before the arc's first flip.
template <typename W>
std::vector<SparseVec> bfop_arc_matrix(const BFOPInstanceT<W>& inst, const MoveSequence& seq,
                                       const Assignment& init) {
  validate_assignment(inst, init);
  for (int v : seq.active_nodes())
    if (v > inst.n) throw ValidationError("move sequence references an unknown variable");
  std::vector<Arc> arcs = find_arcs(seq);
  std::vector<SparseVec> cols;
  cols.reserve(arcs.size());
  for (const Arc& arc : arcs) {
    std::map<int, int> inside;
    for (int k = arc.left + 1; k < arc.right; ++k) ++inside[seq.at(k)];
    std::map<int, int> before;
    for (int k = 0; k < arc.left; ++k) ++before[seq.at(k)];
    auto value_before = [&](int v) {
      auto it = before.find(v);
      int flips = it == before.end() ? 0 : it->second;
      return (init[v] + flips) % 2;
    };
    SparseVec col;
    for (int i : inst.binary_of(arc.node)) {
      const auto& b = inst.binary[i];
      int other = b.x == arc.node ? b.y : b.x;
      auto it = inside.find(other);
      if (it == inside.end() || it->second % 2 == 0) continue;
      int d = b.table[0][0] + b.table[1][1] - b.table[0][1] - b.table[1][0];
      col[i] = value_before(arc.node) != value_before(other) ? d : -d;
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

/// Exact rank of the function-by-arc matrix.
template <typename W>
int bfop_matrix_rank(const BFOPInstanceT<W>& inst, const MoveSequence& seq,
                     const Assignment& init) {
  RankAccumulator acc;
  for (const SparseVec& col : bfop_arc_matrix(inst, seq, init)) acc.add(col);
  return acc.rank();
}

}  // namespace fliplab
