#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fliplab/arcs.hpp"
#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"

namespace fliplab {

/// Layered adversarial instance: layers V_1..V_d with |V_k| = N1 * 3^(k-1),
/// complete bipartite edges between V_1 and every higher layer, and a move
/// sequence of L blocks where block i visits one node per layer cyclically.
/// Every substring of the sequence has low arc rank relative to its length.
struct HardInstance {
  int d = 0;
  int n1 = 0;
  int blocks = 0;
  std::vector<int> layer_size;    // [1..d]
  std::vector<int> layer_offset;  // node_id(k, j) = layer_offset[k] + j + 1
  Graph graph;
  MoveSequence sequence;

  int node_id(int k, int j) const { return layer_offset[k] + j + 1; }
  int total_nodes() const { return layer_offset[d] + layer_size[d]; }
};

inline HardInstance build_hard(int d, int n1, int blocks) {
  if (d < 1 || n1 < 1 || blocks < 1)
    throw ValidationError("layer count, base size and block count must be positive");
  HardInstance inst;
  inst.d = d;
  inst.n1 = n1;
  inst.blocks = blocks;
  inst.layer_size.assign(d + 1, 0);
  inst.layer_offset.assign(d + 1, 0);
  int total = 0;
  for (int k = 1; k <= d; ++k) {
    inst.layer_offset[k] = total;
    inst.layer_size[k] = k == 1 ? n1 : inst.layer_size[k - 1] * 3;
    total += inst.layer_size[k];
  }
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < n1; ++j)
    for (int k = 2; k <= d; ++k)
      for (int i = 0; i < inst.layer_size[k]; ++i)
        edges.push_back({inst.node_id(1, j), inst.node_id(k, i)});
  inst.graph = Graph(total, std::move(edges));

  std::vector<int> moves;
  moves.reserve(static_cast<std::size_t>(blocks) * d);
  for (int i = 1; i <= blocks; ++i)
    for (int k = 1; k <= d; ++k) moves.push_back(inst.node_id(k, i % inst.layer_size[k]));
  inst.sequence = MoveSequence(std::move(moves));
  return inst;
}

/// Default parameterization: d = floor(0.1 log3 n), N1 = ceil(n^0.1),
/// L = ceil(5n/d).
inline HardInstance hard_preset(int n) {
  if (n < 2) throw ValidationError("preset needs n >= 2");
  int d = static_cast<int>(0.1 * std::log(static_cast<double>(n)) / std::log(3.0));
  d = std::max(d, 1);
  int n1 = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.1)));
  int blocks = (5 * n + d - 1) / d;
  return build_hard(d, n1, blocks);
}

/// Counting upper bound on the arc rank of a block-aligned substring of t blocks:
/// sum of |V_k| over layers k in [2..k*] (k* the largest layer with
/// N_k + 1 <= t) plus |V_1| * ceil(t / N_1).
inline std::int64_t hard_counting_bound(const HardInstance& inst, int t_blocks) {
  std::int64_t bound = 0;
  for (int k = 2; k <= inst.d; ++k)
    if (inst.layer_size[k] + 1 <= t_blocks) bound += inst.layer_size[k];
  bound += static_cast<std::int64_t>(inst.n1) * ((t_blocks + inst.n1 - 1) / inst.n1);
  return bound;
}

enum class ScanMode { BlockAligned, FullScan };

struct SubstringRecord {
  int start = 0;
  int length = 0;
  int rank = 0;
  double ratio = 0.0;
};

/// Exact arc rank of every substring: block-aligned mode scans substrings
/// spanning whole blocks (enough to bound every substring); full mode scans all
/// substrings and is refused beyond length 2000. Rank is accumulated
/// incrementally per start, using that an arc's column is a fixed row
/// rescaling of its whole-sequence column, so rank only depends on which
/// arcs the window contains.
inline std::vector<SubstringRecord> scan_substrings(const HardInstance& inst, ScanMode mode) {
  const MoveSequence& seq = inst.sequence;
  const int m = seq.length();
  if (mode == ScanMode::FullScan && m > 2000)
    throw ValidationError("full scan is limited to sequences of length <= 2000");

  const std::vector<Arc> arcs = find_arcs(seq);
  std::vector<SparseVec> canon = halved_arc_columns(seq, arcs, inst.graph, default_config(seq));
  // arcs grouped by right endpoint for the expanding-window walk
  std::vector<std::vector<int>> by_right(m);
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i) by_right[arcs[i].right].push_back(i);

  const int d = inst.d;
  std::vector<int> starts;
  if (mode == ScanMode::BlockAligned) {
    for (int b = 0; b < inst.blocks; ++b) starts.push_back(b * d);
  } else {
    for (int k = 0; k < m; ++k) starts.push_back(k);
  }

  std::vector<SubstringRecord> out;
  for (int a : starts) {
    RankAccumulator acc;
    for (int b = a; b < m; ++b) {
      for (int i : by_right[b])
        if (arcs[i].left >= a) acc.add(canon[i]);
      bool record = mode == ScanMode::FullScan
                        ? b > a
                        : (b - a + 1) % d == 0;
      if (!record) continue;
      SubstringRecord rec;
      rec.start = a;
      rec.length = b - a + 1;
      rec.rank = acc.rank();
      rec.ratio = static_cast<double>(rec.rank) / rec.length;
      if (mode == ScanMode::BlockAligned) {
        int t = rec.length / d;
        if (rec.rank > hard_counting_bound(inst, t))
          throw InternalInvariantError("substring rank exceeds the counting bound");
      }
      out.push_back(rec);
    }
  }
  return out;
}

inline double max_rank_ratio(const HardInstance& inst, ScanMode mode) {
  double best = 0.0;
  for (const SubstringRecord& rec : scan_substrings(inst, mode)) best = std::max(best, rec.ratio);
  return best;
}

}  // namespace fliplab
