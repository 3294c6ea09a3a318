#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fliplab/arcs.hpp"
#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"

namespace fliplab {

enum class ExtractCase { Case1, Case2, Case30, Case31, Case32, DegenerateShortInterval };

inline const char* to_string(ExtractCase c) {
  switch (c) {
    case ExtractCase::Case1: return "1";
    case ExtractCase::Case2: return "2";
    case ExtractCase::Case30: return "3.0";
    case ExtractCase::Case31: return "3.1";
    case ExtractCase::Case32: return "3.2";
    case ExtractCase::DegenerateShortInterval: return "degenerate-short-interval";
  }
  return "?";
}

/// A certified (B, tau, Q) triple: B as a sorted index set into the host
/// sequence, tau a configuration of S(B), Q arcs of B (local coordinates)
/// each mapped to its source arc of the host. Every arc in Q has the same
/// improvement vector in (B, tau) as its source has in (H, gamma), and rank
/// is the recomputed exact rank of Q in B.
struct ExtractionCertificate {
  ExtractCase case_tag = ExtractCase::Case1;
  std::vector<int> b_indices;
  Configuration tau;
  std::vector<Arc> q_arcs;
  std::vector<Arc> sources;
  int rank = 0;
  double ratio = 0.0;
};

/// Arcs contained in I and endpoint-disjoint from C, split by whether they
/// overlap at least one arc of C; witness[i] is an overlapping C-arc for
/// overlap[i].
struct OverlapReport {
  std::vector<Arc> overlap;
  std::vector<Arc> nonoverlap;
  std::vector<Arc> witness;
};

/// Two arcs overlap iff their nodes differ, are graph-adjacent, and the
/// endpoint intervals interleave (neither nested nor disjoint).
inline bool arcs_overlap(const Arc& a, const Arc& b, const Graph& graph) {
  if (a.node == b.node || !graph.adjacent(a.node, b.node)) return false;
  return (a.left < b.left && b.left < a.right && a.right < b.right) ||
         (b.left < a.left && a.left < b.right && b.right < a.right);
}

inline OverlapReport compute_overlap(const MoveSequence& seq, const Interval& I,
                                     const std::vector<Arc>& C, const Graph& graph) {
  for (const Arc& a : C)
    if (!I.contains(a)) throw ValidationError("every arc of C must be contained in I");
  std::set<int> c_endpoints;
  for (const Arc& a : C) {
    c_endpoints.insert(a.left);
    c_endpoints.insert(a.right);
  }
  OverlapReport report;
  for (const Arc& b : find_arcs(seq)) {
    if (!I.contains(b)) continue;
    if (c_endpoints.count(b.left) || c_endpoints.count(b.right)) continue;
    const Arc* wit = nullptr;
    for (const Arc& a : C)
      if (arcs_overlap(b, a, graph)) {
        wit = &a;
        break;
      }
    if (wit) {
      report.overlap.push_back(b);
      report.witness.push_back(*wit);
    } else {
      report.nonoverlap.push_back(b);
    }
  }
  return report;
}

struct ExtractOptions {
  bool allow_general_length = false;  // lift the len == 5n requirement
};

namespace detail {

inline std::int64_t upper_of(const std::vector<Arc>& arcs) {
  std::int64_t u = 0;
  for (const Arc& a : arcs) u = std::max<std::int64_t>(u, a.length());
  return u;
}

inline Configuration restrict_config(const Configuration& cfg, const std::vector<int>& nodes) {
  Configuration out;
  for (int v : nodes) out.set(v, cfg.sign(v));
  return out;
}

/// Keep the first arc (in left-endpoint order) per node.
inline std::vector<Arc> thin_distinct_nodes(const std::vector<Arc>& arcs) {
  std::vector<Arc> out;
  std::set<int> seen;
  for (const Arc& a : arcs)
    if (seen.insert(a.node).second) out.push_back(a);
  return out;
}

inline std::vector<int> all_positions(int m) {
  std::vector<int> p(m);
  for (int k = 0; k < m; ++k) p[k] = k;
  return p;
}

inline void assert_preservation(const MoveSequence& seq, const Configuration& gamma,
                                const ExtractionCertificate& cert, const Graph& graph) {
  MoveSequence B = seq.subsequence(cert.b_indices);
  for (std::size_t i = 0; i < cert.q_arcs.size(); ++i) {
    SparseVec in_b = improvement_vector(B, cert.q_arcs[i], cert.tau, graph);
    SparseVec in_h = improvement_vector(seq, cert.sources[i], gamma, graph);
    if (in_b != in_h)
      throw InternalInvariantError("improvement vector not preserved by the extraction");
  }
}

/// Certificate whose subsequence is the contiguous window I, with tau the
/// replayed configuration at the start of I. Vector preservation is automatic
/// for contiguous windows but asserted anyway.
inline ExtractionCertificate contiguous_certificate(
    const MoveSequence& seq, const Configuration& gamma, const Graph& graph,
    const Interval& I, const std::vector<Arc>& q_sources, ExtractCase tag) {
  ExtractionCertificate cert;
  cert.case_tag = tag;
  for (int k = I.lo; k <= I.hi; ++k) cert.b_indices.push_back(k);
  MoveSequence B = seq.subsequence(cert.b_indices);
  cert.tau = restrict_config(replay(gamma, seq, I.lo), B.active_nodes());
  for (const Arc& a : q_sources) {
    if (!I.contains(a))
      throw InternalInvariantError("extracted arc escapes its interval");
    cert.q_arcs.push_back({a.left - I.lo, a.right - I.lo, a.node});
    cert.sources.push_back(a);
  }
  assert_preservation(seq, gamma, cert, graph);
  cert.rank = rank_of_arcs(B, cert.q_arcs, graph, cert.tau);
  cert.ratio = static_cast<double>(cert.rank) / I.length();
  return cert;
}

/// Quantile boundaries: five pieces of length floor or ceil of len/5, the
/// longer pieces first. Returns the 1-based quantile of an offset into I.
struct Quantiles {
  int starts[6];  // starts[q-1] .. starts[q]-1 is quantile q, offsets into I

  explicit Quantiles(int len) {
    int base = len / 5, rem = len % 5;
    starts[0] = 0;
    for (int q = 1; q <= 5; ++q) starts[q] = starts[q - 1] + base + (q <= rem ? 1 : 0);
  }
  int of(int offset) const {
    for (int q = 1; q <= 5; ++q)
      if (offset < starts[q]) return q;
    throw InternalInvariantError("offset outside its interval");
  }
};

}  // namespace detail

/// Independent verifier for the extraction contract: checks that B, tau, Q
/// are well-formed, recomputes every improvement vector on both sides and the
/// exact rank, and compares against the certificate.
inline bool check_certificate(const MoveSequence& seq, const Configuration& gamma,
                              const ExtractionCertificate& cert, const Graph& graph) {
  const int m = seq.length();
  if (cert.b_indices.empty()) return false;
  for (std::size_t i = 0; i < cert.b_indices.size(); ++i) {
    int k = cert.b_indices[i];
    if (k < 0 || k >= m) return false;
    if (i > 0 && cert.b_indices[i - 1] >= k) return false;
  }
  if (cert.q_arcs.size() != cert.sources.size()) return false;
  MoveSequence B = seq.subsequence(cert.b_indices);
  for (int v : B.active_nodes())
    if (!cert.tau.defined(v)) return false;

  auto is_arc_of = [](const MoveSequence& s, const Arc& a) {
    if (a.left < 0 || a.right >= s.length() || a.left >= a.right) return false;
    if (s.at(a.left) != a.node || s.at(a.right) != a.node) return false;
    for (int k = a.left + 1; k < a.right; ++k)
      if (s.at(k) == a.node) return false;
    return true;
  };
  for (std::size_t i = 0; i < cert.q_arcs.size(); ++i) {
    if (!is_arc_of(B, cert.q_arcs[i]) || !is_arc_of(seq, cert.sources[i])) return false;
    SparseVec in_b = improvement_vector(B, cert.q_arcs[i], cert.tau, graph);
    SparseVec in_h = improvement_vector(seq, cert.sources[i], gamma, graph);
    if (in_b != in_h) return false;
  }
  return rank_of_arcs(B, cert.q_arcs, graph, cert.tau) == cert.rank;
}

/// Constructive subsequence extraction: given a nontrivial sequence of length
/// 5n and a configuration of its active nodes, produce a certified (B, tau, Q)
/// by the case analysis over arc classifications. Existence statements become
/// deterministic searches followed by assertions; an assertion failure is a
/// bug surface, never a silent fallback.
inline ExtractionCertificate extract(const MoveSequence& seq, const Configuration& gamma,
                                     const Graph& graph, ExtractOptions opts = {}) {
  const int m = seq.length();
  const int n = graph.node_count();
  if (!opts.allow_general_length && m != 5 * n)
    throw ValidationError("sequence length must be 5n (or pass the general-length flag)");
  for (int v : seq.active_nodes())
    if (!gamma.defined(v)) throw ValidationError("configuration must cover all active nodes");
  if (!is_nontrivial(seq, graph))
    throw ValidationError("extraction requires a nontrivial sequence");

  ArcClassification cls = classify(seq, graph);
  const std::vector<Arc>& A = cls.arcs;
  const int na = static_cast<int>(A.size());
  if (na == 0) throw ValidationError("sequence has no arcs");
  OccurrenceIndex occ(seq);

  // ---- Case 1: many arcs are bad -----------------------------------------
  int bad_total = 0;
  for (int i = 0; i < na; ++i)
    if (!cls.good[i]) ++bad_total;
  if (100 * bad_total >= na) {
    std::vector<int> db_count(cls.t + 1, 0);
    for (int i = 0; i < na; ++i)
      if (cls.dual_bad[i]) ++db_count[cls.group_of_arc(i)];
    int kgrp = 1;
    for (int g = 2; g <= cls.t; ++g)
      if (db_count[g] > db_count[kgrp]) kgrp = g;
    if (db_count[kgrp] == 0)
      throw InternalInvariantError("bad arcs exist but no arc is dual-bad");
    std::vector<Arc> db;
    for (int i = 0; i < na; ++i)
      if (cls.dual_bad[i] && cls.group_of_arc(i) == kgrp) db.push_back(A[i]);
    const int ell = static_cast<int>(detail::upper_of(db));
    Interval I = 2 * ell <= m
                     ? find_dense_interval(m, db, detail::all_positions(m), ell)
                     : Interval{0, m - 1};
    std::vector<Arc> C = restrict_to(db, I);
    std::vector<Arc> Q = detail::thin_distinct_nodes(C);
    auto cert = detail::contiguous_certificate(seq, gamma, graph, I, Q, ExtractCase::Case1);
    if (2 * cert.rank < static_cast<int>(Q.size()))
      throw InternalInvariantError("distinct-node arc set fell below half rank");
    return cert;
  }

  // ---- Group selection ----------------------------------------------------
  std::vector<std::int64_t> group_size(cls.t + 2, 0), group_good(cls.t + 2, 0);
  for (int i = 0; i < na; ++i) {
    int g = cls.group_of_arc(i);
    ++group_size[g];
    if (cls.good[i]) ++group_good[g];
  }
  int istar = 0;
  for (int g = 1; g <= cls.t; ++g) {
    std::int64_t tri = group_size[g] + (g > 1 ? group_size[g - 1] : 0) + group_size[g + 1];
    if (2 * cls.t * group_good[g] >= na && 7 * group_good[g] >= tri) {
      istar = g;
      break;
    }
  }
  if (istar == 0)
    throw InternalInvariantError("no group satisfies the selection inequalities");
  const std::int64_t upper_d = cls.group_maxlen[istar];

  std::int64_t good_long = 0, good_short = 0;
  for (int i = 0; i < na; ++i) {
    if (cls.group_of_arc(i) != istar || !cls.good[i]) continue;
    if (cls.long_radius[i]) ++good_long; else ++good_short;
  }

  // ---- Case 2: most good arcs of the group are long-radius ----------------
  if (2 * good_long >= group_good[istar]) {
    std::vector<Arc> L;
    for (int i = 0; i < na; ++i)
      if (cls.group_of_arc(i) == istar && cls.long_radius[i]) L.push_back(A[i]);
    const int ell = static_cast<int>(detail::upper_of(L));
    Interval I = 2 * ell <= m
                     ? find_dense_interval(m, L, detail::all_positions(m), ell)
                     : Interval{0, m - 1};
    std::vector<Arc> C = restrict_to(L, I);

    // one long-radius interior index per arc, then the majority side
    std::vector<int> pick(C.size(), -1);
    for (std::size_t i = 0; i < C.size(); ++i) {
      for (int k : arc_interior(seq, C[i], graph))
        if (occ.radius(k) > 2 * upper_d) {
          pick[i] = k;
          break;
        }
      if (pick[i] < 0)
        throw InternalInvariantError("long-radius arc lost its long-radius interior index");
    }
    std::int64_t lefts = 0;
    for (std::size_t i = 0; i < C.size(); ++i)
      if (occ.left_radius(pick[i]) > I.length()) ++lefts;
    const bool left_side = 2 * lefts >= static_cast<std::int64_t>(C.size());

    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < C.size(); ++i) {
      std::int64_t r = left_side ? occ.left_radius(pick[i]) : occ.right_radius(pick[i]);
      if (r > I.length()) sel.push_back(i);
    }
    if (2 * sel.size() < C.size())
      throw InternalInvariantError("majority side lost the majority");
    // left side: order by right endpoints ascending; right side is the mirror
    std::sort(sel.begin(), sel.end(), [&](std::size_t a, std::size_t b) {
      return left_side ? C[a].right < C[b].right : C[a].left > C[b].left;
    });

    std::vector<Arc> Q;
    std::vector<SparseVec> vecs;
    for (std::size_t idx : sel) {
      Q.push_back(C[idx]);
      vecs.push_back(improvement_vector(seq, C[idx], gamma, graph));
    }
    for (std::size_t i = 0; i < Q.size(); ++i) {
      int e = graph.edge_id(Q[i].node, seq.at(pick[sel[i]]));
      if (e < 0 || !vecs[i].count(e))
        throw InternalInvariantError("triangular diagonal entry vanished");
      for (std::size_t j = 0; j < i; ++j)
        if (vecs[j].count(e))
          throw InternalInvariantError("triangular structure broken above the diagonal");
    }
    auto cert = detail::contiguous_certificate(seq, gamma, graph, I, Q, ExtractCase::Case2);
    if (cert.rank != static_cast<int>(Q.size()))
      throw InternalInvariantError("triangular arc set is rank-deficient");
    return cert;
  }

  // ---- Case 3: most good arcs of the group are short-radius ---------------
  if (2 * good_short < group_good[istar])
    throw InternalInvariantError("good arcs escaped the long/short partition");

  // Case 3.0: last group, majority in the last two chunks
  if (istar == cls.t) {
    std::int64_t last_two = 0;
    for (int i = 0; i < na; ++i)
      if (cls.group_of_arc(i) == istar && cls.good[i] && !cls.long_radius[i] &&
          cls.chunk[i] >= cls.s - 1)
        ++last_two;
    if (2 * last_two >= good_short) {
      std::vector<Arc> Q;
      for (int i = 0; i < na; ++i)
        if (cls.chunk[i] >= cls.s - 1) Q.push_back(A[i]);
      Interval I{0, m - 1};
      auto cert = detail::contiguous_certificate(seq, gamma, graph, I, Q, ExtractCase::Case30);
      std::vector<Arc> thin = detail::thin_distinct_nodes(Q);
      if (2 * cert.rank < static_cast<int>(thin.size()))
        throw InternalInvariantError("last-chunk arc set fell below half rank");
      return cert;
    }
  }

  // chunk with the most good short-radius arcs in the group
  std::map<int, std::int64_t> chunk_good;
  for (int i = 0; i < na; ++i)
    if (cls.group_of_arc(i) == istar && cls.good[i] && !cls.long_radius[i])
      ++chunk_good[cls.chunk[i]];
  int jstar = 0;
  std::int64_t best = 0;
  for (auto [j, cnt] : chunk_good)
    if (cnt > best) {
      best = cnt;
      jstar = j;
    }
  if (jstar == 0)
    throw InternalInvariantError("no chunk holds a good short-radius arc");

  std::vector<Arc> cstar;
  for (int i = 0; i < na; ++i)
    if (cls.chunk[i] == jstar && cls.group_of_arc(i) == istar && cls.good[i] &&
        !cls.long_radius[i])
      cstar.push_back(A[i]);
  const int ell = static_cast<int>(detail::upper_of(cstar));

  // P: endpoints of arcs in the group and its two neighbors
  std::vector<int> P;
  {
    std::vector<Arc> tri_arcs;
    for (int i = 0; i < na; ++i) {
      int g = cls.group_of_arc(i);
      if (g >= istar - 1 && g <= istar + 1) tri_arcs.push_back(A[i]);
    }
    P = arc_endpoints(tri_arcs);
  }

  Interval I = 2 * ell <= m ? find_dense_interval(m, cstar, P, ell) : Interval{0, m - 1};
  std::vector<Arc> C = restrict_to(cstar, I);
  if (C.empty()) throw InternalInvariantError("dense interval lost all of its arcs");

  // constant-length interval: a single arc already certifies a constant ratio
  if (4 * ((I.length() + 4) / 5) >= I.length()) {
    std::vector<Arc> Q{C.front()};
    return detail::contiguous_certificate(seq, gamma, graph, I, Q,
                                          ExtractCase::DegenerateShortInterval);
  }

  OverlapReport report = compute_overlap(seq, I, C, graph);

  std::int64_t tri_in_I = 0;
  std::map<int, int> arc_index_by_left;
  for (int i = 0; i < na; ++i) {
    arc_index_by_left[A[i].left] = i;
    int g = cls.group_of_arc(i);
    if (g >= istar - 1 && g <= istar + 1 && I.contains(A[i])) ++tri_in_I;
  }
  const double slack = I.length() / std::sqrt(std::log2(static_cast<double>(n)));

  if (static_cast<double>(report.overlap.size()) >=
      static_cast<double>(tri_in_I) + slack) {
    // ---- Case 3.1: Overlap is large --------------------------------------
    std::vector<Arc> F;
    std::vector<Arc> Fwit;
    for (std::size_t i = 0; i < report.overlap.size(); ++i) {
      int g = cls.group_of_arc(arc_index_by_left.at(report.overlap[i].left));
      if (g >= istar - 1 && g <= istar + 1) continue;
      F.push_back(report.overlap[i]);
      Fwit.push_back(report.witness[i]);
    }
    if (F.empty()) throw InternalInvariantError("large Overlap produced an empty arc family");

    std::int64_t wit_left = 0;
    for (std::size_t i = 0; i < F.size(); ++i)
      if (Fwit[i].left < F[i].left) ++wit_left;
    const bool left_wit = 2 * wit_left >= static_cast<std::int64_t>(F.size());

    std::vector<std::size_t> fprime;
    for (std::size_t i = 0; i < F.size(); ++i)
      if (left_wit ? Fwit[i].left < F[i].left : Fwit[i].left > F[i].left)
        fprime.push_back(i);
    if (2 * fprime.size() < F.size())
      throw InternalInvariantError("witness-side majority lost the majority");

    detail::Quantiles quant(I.length());
    // witness anchor: right endpoint for left witnesses, mirrored otherwise
    auto anchor = [&](std::size_t i) { return left_wit ? Fwit[i].right : Fwit[i].left; };
    std::vector<std::vector<std::size_t>> classes(6);
    for (std::size_t i : fprime) {
      int q = quant.of(anchor(i) - I.lo);
      if (left_wit ? q == 1 : q == 5)
        throw InternalInvariantError("witness anchor landed in the forbidden quantile");
      classes[q].push_back(i);
    }
    int qbest = left_wit ? 2 : 1;
    for (int q = 1; q <= 5; ++q)
      if (classes[q].size() > classes[qbest].size()) qbest = q;
    std::vector<std::size_t> sel = classes[qbest];
    if (8 * sel.size() < F.size())
      throw InternalInvariantError("largest quantile class fell below an eighth");

    std::sort(sel.begin(), sel.end(), [&](std::size_t a, std::size_t b) {
      if (anchor(a) != anchor(b))
        return left_wit ? anchor(a) < anchor(b) : anchor(a) > anchor(b);
      return F[a].left < F[b].left;
    });

    std::vector<Arc> Q;
    std::vector<SparseVec> vecs;
    for (std::size_t i : sel) {
      Q.push_back(F[i]);
      vecs.push_back(improvement_vector(seq, F[i], gamma, graph));
    }
    for (std::size_t i = 0; i < sel.size(); ++i) {
      int e = graph.edge_id(F[sel[i]].node, Fwit[sel[i]].node);
      if (e < 0 || !vecs[i].count(e))
        throw InternalInvariantError("witness edge entry vanished");
      for (std::size_t j = 0; j < i; ++j)
        if (vecs[j].count(e))
          throw InternalInvariantError("witness triangular structure broken");
    }
    auto cert = detail::contiguous_certificate(seq, gamma, graph, I, Q, ExtractCase::Case31);
    if (cert.rank != static_cast<int>(Q.size()))
      throw InternalInvariantError("witness-ordered arc set is rank-deficient");
    return cert;
  }

  // ---- Case 3.2: Overlap is small, delete moves --------------------------
  std::set<int> c_endpoints;
  std::vector<std::set<int>> c_interiors(C.size());
  std::set<int> c_interior_all;
  std::set<int> c_nodes;
  for (std::size_t i = 0; i < C.size(); ++i) {
    c_endpoints.insert(C[i].left);
    c_endpoints.insert(C[i].right);
    c_nodes.insert(C[i].node);
    for (int k : arc_interior(seq, C[i], graph)) {
      c_interiors[i].insert(k);
      c_interior_all.insert(k);
    }
  }
  std::set<int> nonoverlap_left;
  for (const Arc& a : report.nonoverlap) nonoverlap_left.insert(a.left);
  std::map<int, int> oc_nodes;  // node -> #arcs in Overlap or C with that node
  for (const Arc& a : report.overlap) ++oc_nodes[a.node];
  for (const Arc& a : C) ++oc_nodes[a.node];
  std::set<int> p_set(P.begin(), P.end());

  std::map<int, std::vector<int>> occ_by_node;
  for (int k = I.lo; k <= I.hi; ++k) occ_by_node[seq.at(k)].push_back(k);

  const Configuration gamma_prime = replay(gamma, seq, I.lo);
  std::vector<char> removed(m, 0);

  // batch-wise preservation check: after deleting one node's occurrences,
  // every C-vector must be unchanged in the current residual subsequence
  auto residual_preserved = [&]() {
    std::vector<int> kept;
    for (int k = I.lo; k <= I.hi; ++k)
      if (!removed[k]) kept.push_back(k);
    MoveSequence B = seq.subsequence(kept);
    Configuration tau = detail::restrict_config(gamma_prime, B.active_nodes());
    auto local = [&](int k) {
      return static_cast<int>(std::lower_bound(kept.begin(), kept.end(), k) - kept.begin());
    };
    for (const Arc& a : C) {
      Arc b{local(a.left), local(a.right), a.node};
      if (improvement_vector(B, b, tau, graph) != improvement_vector(seq, a, gamma, graph))
        return false;
    }
    return true;
  };

  std::int64_t kept_case_a = 0, kept_pairs = 0, kept_odd_singles = 0;
  for (auto& [u, ks] : occ_by_node) {
    const int cnt = static_cast<int>(ks.size());
    bool changed = false;
    if (cnt == 1) {
      // a: lone occurrence; delete iff its radius is long for the group
      if (occ.radius(ks[0]) > 2 * upper_d) {
        removed[ks[0]] = 1;  // R1
        changed = true;
      } else {
        if (!p_set.count(ks[0]))
          throw InternalInvariantError("kept lone occurrence outside the endpoint set");
        ++kept_case_a;
      }
    } else if (cnt % 2 == 0 || oc_nodes.count(u)) {
      // b and c1: delete consecutive pairs that are NonOverlap arcs
      for (int i = 0; i + 1 < cnt; i += 2) {
        if (nonoverlap_left.count(ks[i])) {
          removed[ks[i]] = removed[ks[i + 1]] = 1;  // R2
          changed = true;
        } else {
          ++kept_pairs;
        }
      }
      if (cnt % 2 == 1) ++kept_odd_singles;  // the always-kept last occurrence
    } else {
      bool touches_c = false;
      for (int k : ks)
        if (c_interior_all.count(k)) touches_c = true;
      if (!touches_c) {
        // c2: u is invisible to C; delete every occurrence
        for (int k : ks) removed[k] = 1;  // R3
        changed = true;
      } else {
        // c3: all occurrences sit inside one C-arc; keep the boundary
        // occurrence with the large radius (ties keep the first)
        std::size_t host = C.size();
        for (std::size_t i = 0; i < C.size(); ++i)
          if (c_interiors[i].count(ks[0])) {
            host = i;
            break;
          }
        if (host == C.size())
          throw InternalInvariantError("odd-count node lost its host arc");
        for (int k : ks)
          if (!c_interiors[host].count(k))
            throw InternalInvariantError("odd-count occurrences split across arcs");
        std::int64_t r_first = occ.radius(ks[0]), r_last = occ.radius(ks[cnt - 1]);
        if (r_first > 2 * upper_d || r_last > 2 * upper_d)
          throw InternalInvariantError("short-radius arc hides a long-radius boundary index");
        if (2 * std::max(r_first, r_last) < ell)
          throw InternalInvariantError("neither boundary occurrence has the large radius");
        int kept = 2 * r_first >= ell ? ks[0] : ks[cnt - 1];
        for (int k : ks)
          if (k != kept) {
            removed[k] = 1;  // R2 pairs
            changed = true;
          }
        if (!p_set.count(kept))
          throw InternalInvariantError("kept boundary occurrence outside the endpoint set");
        ++kept_odd_singles;
      }
    }
    if (changed && !residual_preserved())
      throw InternalInvariantError("deletion batch changed a protected improvement vector");
  }

  for (int e : c_endpoints)
    if (removed[e]) throw InternalInvariantError("deletion touched an endpoint of C");

  ExtractionCertificate cert;
  cert.case_tag = ExtractCase::Case32;
  for (int k = I.lo; k <= I.hi; ++k)
    if (!removed[k]) cert.b_indices.push_back(k);

  std::int64_t p_in_I = 0;
  for (int p : P)
    if (I.contains(p)) ++p_in_I;
  if (static_cast<std::int64_t>(cert.b_indices.size()) >
      p_in_I + 3 * static_cast<std::int64_t>(report.overlap.size()) +
          5 * static_cast<std::int64_t>(C.size()))
    throw InternalInvariantError("residual subsequence exceeds its size budget");

  MoveSequence B = seq.subsequence(cert.b_indices);
  cert.tau = detail::restrict_config(gamma_prime, B.active_nodes());
  auto local = [&](int k) {
    return static_cast<int>(std::lower_bound(cert.b_indices.begin(), cert.b_indices.end(), k) -
                            cert.b_indices.begin());
  };
  for (const Arc& a : C) {
    cert.q_arcs.push_back({local(a.left), local(a.right), a.node});
    cert.sources.push_back(a);
  }
  detail::assert_preservation(seq, gamma, cert, graph);
  cert.rank = rank_of_arcs(B, cert.q_arcs, graph, cert.tau);
  cert.ratio = static_cast<double>(cert.rank) / B.length();

  std::vector<Arc> thin = detail::thin_distinct_nodes(C);
  if (4 * thin.size() < C.size())
    throw InternalInvariantError("same-node multiplicity in C exceeds four");
  if (2 * cert.rank < static_cast<int>(thin.size()))
    throw InternalInvariantError("preserved arc set fell below half rank");
  return cert;
}

}  // namespace fliplab
