#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fliplab/arcs.hpp"
#include "fliplab/bfop.hpp"
#include "fliplab/extract.hpp"
#include "fliplab/flip.hpp"
#include "fliplab/hard.hpp"
#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"

namespace fliplab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Instance JSON: {"n", "edges":[[u,v],...], "weights":[...]?, "dists":[{"lo","hi"},...]?}
// ---------------------------------------------------------------------------

inline json instance_to_json(const WeightedInstance& inst) {
  json j;
  j["n"] = inst.graph.node_count();
  j["edges"] = json::array();
  for (auto [u, v] : inst.graph.edges()) j["edges"].push_back({u, v});
  j["weights"] = inst.weights;
  if (!inst.dists.empty()) {
    j["dists"] = json::array();
    for (const auto& d : inst.dists) {
      if (!d) throw ValidationError("cannot serialize a partially specified distribution list");
      j["dists"].push_back({{"lo", d->lo}, {"hi", d->hi}});
    }
  }
  return j;
}

inline WeightedInstance instance_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    Graph g(n, std::move(edges));
    std::vector<double> weights;
    if (j.contains("weights"))
      weights = j.at("weights").get<std::vector<double>>();
    else
      weights.assign(g.edge_count(), 0.0);
    std::vector<std::optional<DistributionSpec>> dists;
    if (j.contains("dists"))
      for (const auto& d : j.at("dists"))
        dists.push_back(DistributionSpec(d.at("lo").get<double>(), d.at("hi").get<double>()));
    return WeightedInstance(std::move(g), std::move(weights), std::move(dists));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed instance JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Trace JSON: {"initial":[+-1 per node], "moves", "gains", "terminated"}
// ---------------------------------------------------------------------------

inline json trace_to_json(const FlipTrace& trace) {
  json j;
  std::vector<int> init;
  for (int v = 1; v <= trace.initial.size(); ++v) init.push_back(trace.initial.sign(v));
  j["initial"] = init;
  j["moves"] = trace.moves;
  j["gains"] = trace.gains;
  j["terminated"] = trace.terminated;
  return j;
}

inline FlipTrace trace_from_json(const json& j) {
  try {
    FlipTrace trace;
    const auto& init = j.at("initial");
    for (int v = 1; v <= static_cast<int>(init.size()); ++v)
      trace.initial.set(v, init.at(v - 1).get<int>());
    trace.moves = j.at("moves").get<std::vector<int>>();
    trace.gains = j.at("gains").get<std::vector<double>>();
    if (trace.gains.size() != trace.moves.size())
      throw ValidationError("trace gains and moves must have equal length");
    trace.terminated = j.at("terminated").get<bool>();
    trace.steps = static_cast<std::int64_t>(trace.moves.size());
    trace.final_cfg = trace.initial;
    for (int v : trace.moves) trace.final_cfg.flip(v);
    return trace;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed trace JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Certificate JSON: {case, B, tau:{node:+-1}, Q:[{left,right,node,source:{left,right}}], rank, ratio}
// ---------------------------------------------------------------------------

inline ExtractCase extract_case_from_string(const std::string& s) {
  for (ExtractCase c : {ExtractCase::Case1, ExtractCase::Case2, ExtractCase::Case30,
                        ExtractCase::Case31, ExtractCase::Case32,
                        ExtractCase::DegenerateShortInterval})
    if (to_string(c) == s) return c;
  throw ValidationError("unknown certificate case: " + s);
}

inline json certificate_to_json(const ExtractionCertificate& cert) {
  json j;
  j["case"] = to_string(cert.case_tag);
  j["B"] = cert.b_indices;
  json tau = json::object();
  for (int v = 1; v <= cert.tau.size(); ++v)
    if (cert.tau.defined(v)) tau[std::to_string(v)] = cert.tau.sign(v);
  j["tau"] = tau;
  j["Q"] = json::array();
  for (std::size_t i = 0; i < cert.q_arcs.size(); ++i) {
    const Arc& a = cert.q_arcs[i];
    const Arc& s = cert.sources[i];
    j["Q"].push_back({{"left", a.left},
                      {"right", a.right},
                      {"node", a.node},
                      {"source", {{"left", s.left}, {"right", s.right}}}});
  }
  j["rank"] = cert.rank;
  j["ratio"] = cert.ratio;
  return j;
}

inline ExtractionCertificate certificate_from_json(const json& j) {
  try {
    ExtractionCertificate cert;
    cert.case_tag = extract_case_from_string(j.at("case").get<std::string>());
    cert.b_indices = j.at("B").get<std::vector<int>>();
    for (const auto& [key, val] : j.at("tau").items())
      cert.tau.set(std::stoi(key), val.get<int>());
    for (const auto& q : j.at("Q")) {
      int node = q.at("node").get<int>();
      cert.q_arcs.push_back({q.at("left").get<int>(), q.at("right").get<int>(), node});
      cert.sources.push_back(
          {q.at("source").at("left").get<int>(), q.at("source").at("right").get<int>(), node});
    }
    cert.rank = j.at("rank").get<int>();
    cert.ratio = j.at("ratio").get<double>();
    return cert;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed certificate JSON: ") + e.what());
  }
}

inline json arcs_to_json(const std::vector<Arc>& arcs) {
  json j = json::array();
  for (const Arc& a : arcs) j.push_back({{"left", a.left}, {"right", a.right}, {"node", a.node}});
  return j;
}

// ---------------------------------------------------------------------------
// BFOP JSON: {"n", "binary":[{"vars","table","weight"}], "unary":[{"var","table","weight"}]}
// ---------------------------------------------------------------------------

inline json bfop_to_json(const BFOPInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["binary"] = json::array();
  for (const auto& b : inst.binary) {
    j["binary"].push_back({{"vars", {b.x, b.y}},
                           {"table", {{b.table[0][0], b.table[0][1]}, {b.table[1][0], b.table[1][1]}}},
                           {"weight", b.weight}});
  }
  j["unary"] = json::array();
  for (const auto& u : inst.unary)
    j["unary"].push_back(
        {{"var", u.var}, {"table", {u.table[0], u.table[1]}}, {"weight", u.weight}});
  return j;
}

inline BFOPInstance bfop_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<BFOPInstance::Binary> bins;
    if (j.contains("binary"))
      for (const auto& b : j.at("binary")) {
        BFOPInstance::Binary bin;
        bin.x = b.at("vars").at(0).get<int>();
        bin.y = b.at("vars").at(1).get<int>();
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) bin.table[x][y] = b.at("table").at(x).at(y).get<int>();
        bin.weight = b.at("weight").get<double>();
        bins.push_back(bin);
      }
    std::vector<BFOPInstance::Unary> uns;
    if (j.contains("unary"))
      for (const auto& u : j.at("unary")) {
        BFOPInstance::Unary un;
        un.var = u.at("var").get<int>();
        un.table = {u.at("table").at(0).get<int>(), u.at("table").at(1).get<int>()};
        un.weight = u.at("weight").get<double>();
        uns.push_back(un);
      }
    return BFOPInstance(n, std::move(bins), std::move(uns));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed BFOP JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// DIMACS-like weighted 2-CNF: comment lines 'c', header "p cnf n m" or
// "p wcnf n m", clause lines "[weight] lit [lit] 0" (weight only for wcnf).
// ---------------------------------------------------------------------------

inline std::pair<int, std::vector<Clause>> read_wcnf(std::istream& in) {
  int n = -1;
  bool weighted = false;
  std::vector<Clause> clauses;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      int m;
      if (!(ls >> fmt >> n >> m) || (fmt != "cnf" && fmt != "wcnf"))
        throw ValidationError("malformed problem line: " + line);
      weighted = fmt == "wcnf";
      continue;
    }
    if (n < 0) throw ValidationError("clause before problem line");
    Clause c;
    std::istringstream cs(line);
    if (weighted) {
      if (!(cs >> c.weight)) throw ValidationError("missing clause weight: " + line);
    }
    std::vector<int> lits;
    int lit;
    while (cs >> lit && lit != 0) lits.push_back(lit);
    if (lits.empty() || lits.size() > 2)
      throw ValidationError("clause must have one or two literals: " + line);
    for (int l : lits)
      if (std::abs(l) < 1 || std::abs(l) > n) throw ValidationError("literal out of range: " + line);
    c.lit1 = lits[0];
    if (lits.size() == 2) c.lit2 = lits[1];
    clauses.push_back(c);
  }
  if (n < 0) throw ValidationError("missing problem line");
  return {n, clauses};
}

// ---------------------------------------------------------------------------
// CSV emitters
// ---------------------------------------------------------------------------

inline std::string substring_csv(const std::vector<SubstringRecord>& recs) {
  std::ostringstream os;
  os.precision(17);
  os << "start,length,rank,ratio\n";
  for (const SubstringRecord& r : recs)
    os << r.start << ',' << r.length << ',' << r.rank << ',' << r.ratio << '\n';
  return os.str();
}

/// Improvement-vector matrix dump: one row per edge id, one column per arc.
inline std::string arc_matrix_csv(const MoveSequence& seq, const std::vector<Arc>& arcs,
                                  const Configuration& gamma, const Graph& graph) {
  std::vector<SparseVec> cols;
  for (const Arc& a : arcs) cols.push_back(improvement_vector(seq, a, gamma, graph));
  std::ostringstream os;
  os << "edge_id";
  for (std::size_t i = 0; i < arcs.size(); ++i) os << ",arc" << i;
  os << '\n';
  for (int e = 0; e < graph.edge_count(); ++e) {
    os << e;
    for (const SparseVec& col : cols) {
      auto it = col.find(e);
      os << ',' << (it == col.end() ? 0 : it->second);
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << content;
}

inline json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace fliplab
