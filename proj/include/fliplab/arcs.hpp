#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"

namespace fliplab {

/// A sequence of moves (node ids) over a host graph. Positions are 0-based.
class MoveSequence {
 public:
  MoveSequence() = default;
  explicit MoveSequence(std::vector<int> moves) : moves_(std::move(moves)) {
    for (int v : moves_)
      if (v < 1) throw ValidationError("move must be a valid node id");
  }

  int length() const { return static_cast<int>(moves_.size()); }
  int at(int k) const { return moves_[k]; }
  const std::vector<int>& moves() const { return moves_; }

  /// Active nodes S(H), sorted.
  std::vector<int> active_nodes() const {
    std::vector<int> s = moves_;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  MoveSequence substring(int lo, int hi) const {  // inclusive bounds
    return MoveSequence(std::vector<int>(moves_.begin() + lo, moves_.begin() + hi + 1));
  }

  MoveSequence subsequence(const std::vector<int>& indices) const {
    std::vector<int> out;
    out.reserve(indices.size());
    for (int k : indices) out.push_back(moves_[k]);
    return MoveSequence(std::move(out));
  }

 private:
  std::vector<int> moves_;
};

/// Two consecutive occurrences of the same node: moves[left]=moves[right]=node
/// with no occurrence strictly between.
struct Arc {
  int left;
  int right;
  int node;
  int length() const { return right - left + 1; }
  bool operator==(const Arc&) const = default;
};

/// Sparse edge-indexed improvement vector; entries in {-2,0,2}.
using SparseVec = std::map<int, int>;

/// All arcs in left-endpoint order.
inline std::vector<Arc> find_arcs(const MoveSequence& seq) {
  std::vector<Arc> arcs;
  std::map<int, int> last;
  for (int k = 0; k < seq.length(); ++k) {
    int v = seq.at(k);
    auto it = last.find(v);
    if (it != last.end()) arcs.push_back({it->second, k, v});
    last[v] = k;
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.left < b.left; });
  return arcs;
}

/// Predecessor/successor occurrence indices for every position, with
/// kNegInf/kPosInf sentinels.
struct OccurrenceIndex {
  std::vector<std::int64_t> pred;
  std::vector<std::int64_t> succ;

  explicit OccurrenceIndex(const MoveSequence& seq)
      : pred(seq.length(), kNegInf), succ(seq.length(), kPosInf) {
    std::map<int, int> last;
    for (int k = 0; k < seq.length(); ++k) {
      auto it = last.find(seq.at(k));
      if (it != last.end()) {
        pred[k] = it->second;
        succ[it->second] = k;
      }
      last[seq.at(k)] = k;
    }
  }

  std::int64_t left_radius(int k) const {
    return pred[k] == kNegInf ? kPosInf : k - pred[k] + 1;
  }
  std::int64_t right_radius(int k) const {
    return succ[k] == kPosInf ? kPosInf : succ[k] - k + 1;
  }
  std::int64_t radius(int k) const {
    return std::max(left_radius(k), right_radius(k));
  }
};

inline std::pair<std::int64_t, std::int64_t> pred_succ(const MoveSequence& seq, int k) {
  if (k < 0 || k >= seq.length()) throw ValidationError("index out of range");
  OccurrenceIndex occ(seq);
  return {occ.pred[k], occ.succ[k]};
}

inline std::int64_t move_radius(const MoveSequence& seq, int k) {
  if (k < 0 || k >= seq.length()) throw ValidationError("index out of range");
  return OccurrenceIndex(seq).radius(k);
}

/// Positions strictly inside the arc whose node is a graph neighbor of the
/// arc's node and occurs an odd number of times strictly inside.
inline std::vector<int> arc_interior(const MoveSequence& seq, const Arc& arc,
                                     const Graph& graph) {
  std::map<int, int> count;
  for (int k = arc.left + 1; k < arc.right; ++k) ++count[seq.at(k)];
  std::vector<int> interior;
  for (int k = arc.left + 1; k < arc.right; ++k) {
    int v = seq.at(k);
    if (count[v] % 2 == 1 && graph.adjacent(arc.node, v)) interior.push_back(k);
  }
  return interior;
}

inline bool is_nontrivial(const MoveSequence& seq, const Graph& graph) {
  for (const Arc& a : find_arcs(seq))
    if (arc_interior(seq, a, graph).empty()) return false;
  return true;
}

/// Max radius over the arc's interior; errors on trivial arcs.
inline std::int64_t arc_radius(const MoveSequence& seq, const Arc& arc,
                               const Graph& graph, const OccurrenceIndex& occ) {
  auto interior = arc_interior(seq, arc, graph);
  if (interior.empty()) throw ValidationError("arc_radius is undefined for a trivial arc");
  std::int64_t r = 0;
  for (int k : interior) r = std::max(r, occ.radius(k));
  return r;
}

inline std::int64_t arc_radius(const MoveSequence& seq, const Arc& arc, const Graph& graph) {
  return arc_radius(seq, arc, graph, OccurrenceIndex(seq));
}

/// Configuration after applying the first prefix_len moves to cfg0.
inline Configuration replay(const Configuration& cfg0, const MoveSequence& seq,
                            int prefix_len) {
  Configuration cfg = cfg0;
  for (int k = 0; k < prefix_len; ++k) cfg.flip(seq.at(k));
  return cfg;
}

inline Configuration default_config(const MoveSequence& seq) {
  Configuration cfg;
  for (int v : seq.active_nodes()) cfg.set(v, -1);
  return cfg;
}

/// Improvement vector of an arc with respect to an initial configuration of
/// the active nodes: entry at edge (node(arc), v) is 2*g(node)*g(v) where g is
/// the configuration just before the left endpoint move, nonzero iff v occurs
/// an odd number of times strictly inside the arc.
inline SparseVec improvement_vector(const MoveSequence& seq, const Arc& arc,
                                    const Configuration& init, const Graph& graph) {
  std::map<int, int> inside;
  for (int k = arc.left + 1; k < arc.right; ++k) ++inside[seq.at(k)];
  // sign of x just before the left endpoint move
  std::map<int, int> before;
  for (int k = 0; k < arc.left; ++k) ++before[seq.at(k)];
  auto sign_before = [&](int x) {
    int s = init.sign(x);
    auto it = before.find(x);
    if (it != before.end() && it->second % 2 == 1) s = -s;
    return s;
  };
  SparseVec vec;
  int su = sign_before(arc.node);
  for (auto [v, e] : graph.neighbors(arc.node)) {
    auto it = inside.find(v);
    if (it != inside.end() && it->second % 2 == 1) vec[e] = 2 * su * sign_before(v);
  }
  return vec;
}

template <typename W>
W inner_product(const SparseVec& vec, const std::vector<W>& weights) {
  W total(0);
  for (auto [e, val] : vec) total += weights[e] * W(val);
  return total;
}

/// True iff every arc's vector-weight inner product lies in (0, eps].
template <typename W>
bool is_eps_improving(const MoveSequence& seq, const std::vector<Arc>& arcs,
                      const Configuration& init, const std::vector<W>& weights,
                      const Graph& graph, const W& eps) {
  if (!(eps > W(0))) throw ValidationError("eps must be positive");
  for (const Arc& a : arcs) {
    W ip = inner_product(improvement_vector(seq, a, init, graph), weights);
    if (!(ip > W(0) && ip <= eps)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Exact rank
// ---------------------------------------------------------------------------

/// Exact integer rank by fraction-free (Bareiss) elimination with full
/// pivoting. Matrix is given column-major.
inline int bareiss_rank(std::vector<std::vector<BigInt>> cols) {
  const int nc = static_cast<int>(cols.size());
  if (nc == 0) return 0;
  const int nr = static_cast<int>(cols[0].size());
  int rank = 0;
  BigInt prev(1);
  for (; rank < std::min(nr, nc); ++rank) {
    int pr = -1, pc = -1;
    for (int c = rank; c < nc && pr < 0; ++c)
      for (int r = rank; r < nr; ++r)
        if (cols[c][r] != 0) {
          pr = r;
          pc = c;
          break;
        }
    if (pr < 0) break;
    std::swap(cols[rank], cols[pc]);
    if (pr != rank)
      for (int c = 0; c < nc; ++c) std::swap(cols[c][pr], cols[c][rank]);
    const BigInt pivot = cols[rank][rank];
    for (int c = rank + 1; c < nc; ++c) {
      for (int r = rank + 1; r < nr; ++r)
        cols[c][r] = (cols[c][r] * pivot - cols[rank][r] * cols[c][rank]) / prev;
      cols[c][rank] = 0;
    }
    prev = pivot;
  }
  return rank;
}

/// Incremental exact rank over the rationals: feed sparse integer columns,
/// maintained as a reduced echelon basis keyed by pivot coordinate.
class RankAccumulator {
 public:
  /// Returns true iff the column increased the rank.
  bool add(const SparseVec& col) {
    std::map<int, Rational> v;
    for (auto [r, val] : col)
      if (val != 0) v[r] = Rational(val);
    for (const auto& b : basis_) {
      auto it = v.find(b.pivot);
      if (it == v.end()) continue;
      Rational f = it->second;
      for (const auto& [r, bv] : b.vec) {
        Rational& slot = v[r];
        slot -= f * bv;
        if (slot == 0) v.erase(r);
      }
    }
    if (v.empty()) return false;
    int pivot = v.begin()->first;
    Rational pv = v.begin()->second;
    std::map<int, Rational> norm;
    for (auto& [r, val] : v) norm[r] = val / pv;
    basis_.push_back({pivot, std::move(norm)});
    return true;
  }

  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  struct BasisVec {
    int pivot;
    std::map<int, Rational> vec;
  };
  std::vector<BasisVec> basis_;
};

/// Columns of the arc matrix with entries divided by 2 (so in {-1,0,1});
/// scaling by a nonzero constant preserves rank.
inline std::vector<SparseVec> halved_arc_columns(const MoveSequence& seq,
                                                 const std::vector<Arc>& arcs,
                                                 const Graph& graph,
                                                 const Configuration& init) {
  std::vector<SparseVec> cols;
  cols.reserve(arcs.size());
  for (const Arc& a : arcs) {
    SparseVec col;
    for (auto [e, val] : improvement_vector(seq, a, init, graph)) col[e] = val / 2;
    cols.push_back(std::move(col));
  }
  return cols;
}

/// Exact rank of the edge-by-arc matrix of improvement vectors with respect
/// to the given initial configuration.
inline int rank_of_arcs(const MoveSequence& seq, const std::vector<Arc>& arcs,
                        const Graph& graph, const Configuration& init) {
  if (arcs.empty()) return 0;
  auto sparse_cols = halved_arc_columns(seq, arcs, graph, init);
  // compress to the union support of the columns
  std::map<int, int> row_of;
  for (const auto& c : sparse_cols)
    for (auto [e, val] : c) row_of.emplace(e, 0);
  int nr = 0;
  for (auto& [e, r] : row_of) r = nr++;
  std::vector<std::vector<BigInt>> cols;
  cols.reserve(sparse_cols.size());
  for (const auto& c : sparse_cols) {
    std::vector<BigInt> dense(nr, 0);
    for (auto [e, val] : c) dense[row_of[e]] = val;
    cols.push_back(std::move(dense));
  }
  return bareiss_rank(std::move(cols));
}

/// Rank with the default all-(-1) configuration; independent of the choice of
/// initial configuration.
inline int rank_of_arcs(const MoveSequence& seq, const std::vector<Arc>& arcs,
                        const Graph& graph) {
  return rank_of_arcs(seq, arcs, graph, default_config(seq));
}

// ---------------------------------------------------------------------------
// Classification: chunks, groups, good/bad, dual-bad, long/short radius
// ---------------------------------------------------------------------------

/// Dyadic chunk id of an arc length (>= 2): chunk j holds lengths in
/// [2^{j-1}+1, 2^j].
inline int chunk_of_length(int len) {
  return static_cast<int>(std::bit_width(static_cast<unsigned>(len - 1)));
}

inline int chunk_width(int n) {  // w = ceil(sqrt(log2 n)), at least 1
  if (n < 2) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(std::log2(static_cast<double>(n))))));
}

struct ArcClassification {
  int m = 0;  // sequence length
  int s = 0;  // chunk count, ceil(log2 m)
  int w = 0;  // chunks per group, ceil(sqrt(log2 n))
  int t = 0;  // group count, ceil(s/w)
  std::vector<Arc> arcs;  // all arcs, left-endpoint order
  std::vector<int> chunk;             // 1-based chunk id per arc
  std::vector<std::int64_t> radius;   // arc radius (may be kPosInf)
  std::vector<char> good;
  std::vector<char> dual_bad;
  std::vector<char> long_radius;          // radius > 2 * maxlen(group)
  std::vector<std::int64_t> group_maxlen; // [1..t], 0 when group empty

  int group_of_chunk(int j) const { return (j - 1) / w + 1; }
  int group_of_arc(int i) const { return group_of_chunk(chunk[i]); }

  std::vector<int> arcs_in_group(int g) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(arcs.size()); ++i)
      if (group_of_arc(i) == g) out.push_back(i);
    return out;
  }
};

/// Full arc classification of a nontrivial sequence over graph with n nodes.
inline ArcClassification classify(const MoveSequence& seq, const Graph& graph) {
  ArcClassification cls;
  cls.m = seq.length();
  cls.arcs = find_arcs(seq);
  cls.s = cls.m <= 1 ? 1 : static_cast<int>(std::bit_width(static_cast<unsigned>(cls.m - 1)));
  cls.w = chunk_width(graph.node_count());
  cls.t = (cls.s + cls.w - 1) / cls.w;

  OccurrenceIndex occ(seq);
  const std::int64_t pow_w = std::int64_t(1) << cls.w;
  const int k = static_cast<int>(cls.arcs.size());
  cls.chunk.resize(k);
  cls.radius.resize(k);
  cls.good.resize(k);
  cls.dual_bad.resize(k);
  cls.long_radius.resize(k);
  cls.group_maxlen.assign(cls.t + 1, 0);

  for (int i = 0; i < k; ++i) {
    const Arc& a = cls.arcs[i];
    cls.chunk[i] = chunk_of_length(a.length());
    if (cls.chunk[i] > cls.s)
      throw InternalInvariantError("arc length exceeds the sequence length");
    // trivial arcs (empty interior) take radius 0: max over an empty set,
    // keeping them short-radius rather than erroring (only arc_radius, the
    // standalone query, treats them as an error)
    cls.radius[i] = arc_interior(seq, a, graph).empty() ? 0 : arc_radius(seq, a, graph, occ);

    // good: min(leftRadius(left), rightRadius(right)) >= len / 2^w
    std::int64_t lr = occ.left_radius(a.left);
    std::int64_t rr = occ.right_radius(a.right);
    auto side_ok = [&](std::int64_t r) { return r == kPosInf || r * pow_w >= a.length(); };
    cls.good[i] = side_ok(lr) && side_ok(rr);

    // dual-bad: an existing adjacent same-node arc longer than len * 2^w
    bool db = false;
    if (lr != kPosInf && lr > static_cast<std::int64_t>(a.length()) * pow_w) db = true;
    if (rr != kPosInf && rr > static_cast<std::int64_t>(a.length()) * pow_w) db = true;
    cls.dual_bad[i] = db;

    int g = cls.group_of_chunk(cls.chunk[i]);
    cls.group_maxlen[g] = std::max<std::int64_t>(cls.group_maxlen[g], a.length());
  }
  for (int i = 0; i < k; ++i) {
    std::int64_t ml = cls.group_maxlen[cls.group_of_arc(i)];
    cls.long_radius[i] = cls.radius[i] == kPosInf || cls.radius[i] > 2 * ml;
  }
  return cls;
}

// ---------------------------------------------------------------------------
// Interval cover
// ---------------------------------------------------------------------------

struct Interval {
  int lo = 0;
  int hi = -1;  // inclusive; empty when hi < lo
  int length() const { return hi - lo + 1; }
  bool contains(int k) const { return lo <= k && k <= hi; }
  bool contains(const Arc& a) const { return lo <= a.left && a.right <= hi; }
  bool operator==(const Interval&) const = default;
};

/// The even/odd/boundary families of length-2l intervals covering [0, m).
struct IntervalCover {
  std::vector<Interval> even;
  std::vector<Interval> odd;
  Interval boundary;

  std::vector<Interval> all() const {
    std::vector<Interval> out = even;
    out.insert(out.end(), odd.begin(), odd.end());
    out.push_back(boundary);
    return out;
  }
};

inline IntervalCover build_cover(int m, int l) {
  if (l < 1 || 2 * l > m) throw ValidationError("cover requires 1 <= l <= m/2");
  IntervalCover cover;
  for (int i = 1; i <= m / (2 * l); ++i)
    cover.even.push_back({(2 * i - 2) * l, 2 * i * l - 1});
  for (int i = 1; i <= (m - l) / (2 * l); ++i)
    cover.odd.push_back({(2 * i - 1) * l, (2 * i + 1) * l - 1});
  cover.boundary = {m - 2 * l, m - 1};
  return cover;
}

/// An interval I of length 2l with |C restricted to I|/|C| >=
/// max(2l/(16m), |P cap I|/(4|P|)), located by scanning the cover. The
/// averaging lemma guarantees existence.
inline Interval find_dense_interval(int m, const std::vector<Arc>& C,
                                    const std::vector<int>& P, int l) {
  if (C.empty()) throw ValidationError("find_dense_interval requires nonempty C");
  if (P.empty()) throw ValidationError("find_dense_interval requires nonempty P");
  for (const Arc& a : C)
    if (a.length() > l) throw ValidationError("all arcs in C must have length <= l");

  const auto cover = build_cover(m, l).all();
  const std::int64_t c_total = static_cast<std::int64_t>(C.size());
  const std::int64_t p_total = static_cast<std::int64_t>(P.size());
  for (const Interval& I : cover) {
    std::int64_t inside = 0;
    for (const Arc& a : C)
      if (I.contains(a)) ++inside;
    std::int64_t p_inside = 0;
    for (int k : P)
      if (I.contains(k)) ++p_inside;
    // inside/|C| >= 2l/(16m)  and  inside/|C| >= |P cap I|/(4|P|)
    if (inside * 16 * m >= c_total * 2 * l && inside * 4 * p_total >= c_total * p_inside)
      return I;
  }
  throw InternalInvariantError("no dense interval found; averaging lemma violated");
}

inline std::vector<Arc> restrict_to(const std::vector<Arc>& C, const Interval& I) {
  std::vector<Arc> out;
  for (const Arc& a : C)
    if (I.contains(a)) out.push_back(a);
  return out;
}

inline std::vector<int> arc_endpoints(const std::vector<Arc>& C) {
  std::vector<int> out;
  for (const Arc& a : C) {
    out.push_back(a.left);
    out.push_back(a.right);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fliplab
