// fliplab: single-binary command-line front end.
//
// Subcommands: run, analyze, extract, check-cert, hard, reduce, mc, bench.
// Exit codes: 0 success, 1 usage error, 2 validation error (malformed input),
// 3 internal invariant violation (a diagnostic bundle is written).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fliplab/fliplab.hpp"
#include "fliplab/io.hpp"

using namespace fliplab;

namespace {

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_path, content);
    std::cout << "wrote " << out_path << "\n";
  }
}

PivotRule parse_pivot(const std::string& s) {
  if (s == "first") return PivotRule::FirstImprovement;
  if (s == "best") return PivotRule::BestImprovement;
  if (s == "random") return PivotRule::RandomImprovement;
  throw ValidationError("unknown pivot rule: " + s + " (expected first|best|random)");
}

GraphFamily parse_family(const std::string& s) {
  if (s == "complete") return GraphFamily::Complete;
  if (s == "er") return GraphFamily::ErdosRenyi;
  if (s == "bounded") return GraphFamily::BoundedDegree;
  throw ValidationError("unknown graph family: " + s + " (expected complete|er|bounded)");
}

ScanMode parse_scan(const std::string& s) {
  if (s == "block-aligned") return ScanMode::BlockAligned;
  if (s == "full") return ScanMode::FullScan;
  throw ValidationError("unknown scan mode: " + s + " (expected block-aligned|full)");
}

// A sequence file is either a trace ({"initial","moves",...}) or a bare
// sequence ({"initial","moves"}); both yield (initial configuration, moves).
std::pair<Configuration, MoveSequence> read_sequence_file(const std::string& path) {
  json j = parse_json_file(path);
  if (!j.contains("initial") || !j.contains("moves"))
    throw ValidationError(path + ": expected fields \"initial\" and \"moves\"");
  std::vector<int> init = j.at("initial").get<std::vector<int>>();
  std::vector<int> moves = j.at("moves").get<std::vector<int>>();
  Configuration gamma(static_cast<int>(init.size()));
  for (std::size_t v = 0; v < init.size(); ++v)
    gamma.set(static_cast<int>(v) + 1, init[v]);
  return {gamma, MoveSequence(std::move(moves))};
}

struct Args {
  std::string graph_file, bfop_file, trace_file, seq_file, cert_file, in_file, out_path;
  std::string pivot = "first", scan = "block-aligned", family = "complete", kind;
  std::uint64_t seed = 0;
  bool random_init = false;
  bool allow_general_length = false;
  int d = 2, n1 = 2, blocks = 60;
  double er_p = 0.5, eps = 0.1;
  int max_degree = 4, trials = 20, threads = 1;
  std::int64_t samples = 100000;
  std::vector<int> sizes{16, 32};
  std::vector<double> phis{1.0};
};

int cmd_run(const Args& a) {
  if (!a.bfop_file.empty()) {
    BFOPInstance inst = bfop_from_json(parse_json_file(a.bfop_file));
    Rng rng(a.seed);
    Assignment init = a.random_init ? random_assignment(inst.n, rng)
                                    : Assignment(inst.n + 1, 0);
    auto tr = run_flip_bfop(inst, init, parse_pivot(a.pivot),
                            default_step_cap(std::max(inst.n, 1)), a.seed);
    json j{{"initial", std::vector<int>(init.begin() + 1, init.end())},
           {"moves", tr.moves},
           {"gains", tr.gains},
           {"terminated", tr.terminated},
           {"final", std::vector<int>(tr.final_assignment.begin() + 1,
                                      tr.final_assignment.end())}};
    emit(a.out_path, j.dump(2));
    std::cout << "steps=" << tr.moves.size() << " terminated=" << tr.terminated << "\n";
    return 0;
  }
  WeightedInstance inst = instance_from_json(parse_json_file(a.graph_file));
  if (!inst.dists.empty()) inst = sample_weights(inst, derive_seed(a.seed, 0));
  Rng rng(a.seed);
  int n = inst.node_count();
  Configuration init =
      a.random_init ? Configuration::random(n, rng) : Configuration::constant(n, 1);
  FlipTrace tr = run_flip(inst, init, parse_pivot(a.pivot), default_step_cap(n), a.seed);
  emit(a.out_path, trace_to_json(tr).dump(2));
  std::cout << "steps=" << tr.steps << " terminated=" << tr.terminated << "\n";
  return 0;
}

int cmd_analyze(const Args& a) {
  Graph g = instance_from_json(parse_json_file(a.graph_file)).graph;
  auto [gamma, seq] = read_sequence_file(a.seq_file.empty() ? a.trace_file : a.seq_file);
  std::vector<Arc> arcs = find_arcs(seq);
  ArcClassification cls = classify(seq, g);
  int good = 0, bad = 0, dual_bad = 0, long_radius = 0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (cls.good[i]) ++good; else ++bad;
    if (cls.dual_bad[i]) ++dual_bad;
    if (cls.long_radius[i]) ++long_radius;
  }
  json j{{"length", seq.length()},
         {"active_nodes", seq.active_nodes()},
         {"arcs", arcs_to_json(arcs)},
         {"rank", rank_of_arcs(seq, arcs, g, gamma)},
         {"nontrivial", is_nontrivial(seq, g)},
         {"good", good},
         {"bad", bad},
         {"dual_bad", dual_bad},
         {"long_radius", long_radius}};
  emit(a.out_path, j.dump(2));
  return 0;
}

int cmd_extract(const Args& a) {
  Graph g = instance_from_json(parse_json_file(a.graph_file)).graph;
  auto [gamma, seq] = read_sequence_file(a.seq_file.empty() ? a.trace_file : a.seq_file);
  ExtractionCertificate cert =
      extract(seq, gamma, g, ExtractOptions{.allow_general_length = a.allow_general_length});
  emit(a.out_path, certificate_to_json(cert).dump(2));
  std::cout << "case=" << to_string(cert.case_tag) << " rank=" << cert.rank << "\n";
  return 0;
}

int cmd_check_cert(const Args& a) {
  Graph g = instance_from_json(parse_json_file(a.graph_file)).graph;
  auto [gamma, seq] = read_sequence_file(a.seq_file.empty() ? a.trace_file : a.seq_file);
  ExtractionCertificate cert = certificate_from_json(parse_json_file(a.cert_file));
  bool ok = check_certificate(seq, gamma, cert, g);
  std::cout << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : 2;
}

int cmd_hard(const Args& a) {
  HardInstance hi = build_hard(a.d, a.n1, a.blocks);
  std::string csv = substring_csv(scan_substrings(hi, parse_scan(a.scan)));
  emit(a.out_path, csv);
  std::cout << "n=" << hi.total_nodes() << " length=" << hi.sequence.length()
            << " max_ratio=" << max_rank_ratio(hi, parse_scan(a.scan)) << "\n";
  return 0;
}

int cmd_reduce(const Args& a) {
  BFOPInstance inst;
  if (a.kind == "max2sat") {
    std::ifstream in(a.in_file);
    if (!in) throw ValidationError("cannot open " + a.in_file);
    auto [n, clauses] = read_wcnf(in);
    inst = reduce_max2sat(n, clauses);
  } else if (a.kind == "dcut" || a.kind == "hopfield") {
    json j = parse_json_file(a.in_file);
    int n = j.at("n").get<int>();
    std::vector<WeightedEdge> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    if (a.kind == "dcut") {
      inst = reduce_directed_cut(n, edges);
    } else {
      std::vector<double> thr = j.at("thresholds").get<std::vector<double>>();
      thr.insert(thr.begin(), 0.0);  // file lists thresholds for nodes 1..n
      inst = reduce_hopfield(n, edges, thr);
    }
  } else if (a.kind == "coordgame") {
    json j = parse_json_file(a.in_file);
    int n = j.at("n").get<int>();
    std::vector<CoordinationEdge> edges;
    for (const auto& e : j.at("edges")) {
      CoordinationEdge ce;
      ce.u = e.at("u").get<int>();
      ce.v = e.at("v").get<int>();
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) ce.payoff[p][q] = e.at("payoff")[p][q].get<double>();
      edges.push_back(ce);
    }
    inst = reduce_coordination(n, edges);
  } else {
    throw ValidationError("unknown reduction kind: " + a.kind +
                          " (expected max2sat|dcut|hopfield|coordgame)");
  }
  emit(a.out_path, bfop_to_json(inst).dump(2));
  return 0;
}

int cmd_mc(const Args& a) {
  json j = parse_json_file(a.in_file);
  std::vector<std::vector<int>> vectors = j.at("vectors").get<std::vector<std::vector<int>>>();
  std::vector<DistributionSpec> dists;
  for (const auto& d : j.at("dists"))
    dists.emplace_back(d.at(0).get<double>(), d.at(1).get<double>());
  double eps = j.contains("eps") ? j.at("eps").get<double>() : a.eps;
  std::int64_t samples = j.contains("samples") ? j.at("samples").get<std::int64_t>() : a.samples;
  MCReport rep = mc_lemma_probability(vectors, dists, eps, samples, a.seed);
  json out{{"samples", rep.samples},
           {"hits", rep.hits},
           {"empirical", rep.empirical},
           {"bound", rep.bound},
           {"ci_half_width", rep.ci_half_width}};
  emit(a.out_path, out.dump(2));
  return 0;
}

int cmd_bench(const Args& a) {
  ExperimentPlan plan;
  plan.family = parse_family(a.family);
  plan.er_p = a.er_p;
  plan.max_degree = a.max_degree;
  plan.sizes = a.sizes;
  plan.phis = a.phis;
  plan.rule = parse_pivot(a.pivot);
  plan.trials = a.trials;
  plan.base_seed = a.seed;
  emit(a.out_path, experiment_csv(run_experiment(plan, a.threads)));
  return 0;
}

void write_diagnostic(int argc, char** argv, const std::string& what,
                      const std::string& out_path) {
  std::vector<std::string> args(argv, argv + argc);
  json bundle{{"argv", args}, {"failing_assertion", what}};
  std::string path = out_path.empty() ? "fliplab-diagnostic.json" : out_path + ".diagnostic.json";
  std::ofstream out(path);
  out << bundle.dump(2) << "\n";
  std::cerr << "internal invariant violated; diagnostic bundle written to " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fliplab: local-search laboratory for Max-Cut and binary function optimization"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", a.seed, "RNG seed");
    sub->add_option("--out", a.out_path, "output file (default: stdout)");
  };

  CLI::App* run = app.add_subcommand("run", "run FLIP on a graph or BFOP instance");
  run->add_option("--graph", a.graph_file, "weighted instance JSON");
  run->add_option("--bfop", a.bfop_file, "BFOP instance JSON");
  run->add_option("--pivot", a.pivot, "pivot rule: first|best|random");
  run->add_flag("--random-init", a.random_init, "random initial configuration (seeded)");
  add_common(run);

  CLI::App* analyze = app.add_subcommand("analyze", "arcs, rank, and classification of a trace");
  analyze->add_option("--graph", a.graph_file, "weighted instance JSON")->required();
  analyze->add_option("--trace", a.trace_file, "trace JSON");
  analyze->add_option("--seq", a.seq_file, "sequence JSON {initial, moves}");
  add_common(analyze);

  CLI::App* extract_cmd = app.add_subcommand("extract", "extract a rank certificate");
  extract_cmd->add_option("--graph", a.graph_file, "weighted instance JSON")->required();
  extract_cmd->add_option("--trace", a.trace_file, "trace JSON");
  extract_cmd->add_option("--seq", a.seq_file, "sequence JSON {initial, moves}");
  extract_cmd->add_flag("--allow-general-length", a.allow_general_length,
                        "accept sequences of length != 5n");
  add_common(extract_cmd);

  CLI::App* check = app.add_subcommand("check-cert", "verify a certificate independently");
  check->add_option("--graph", a.graph_file, "weighted instance JSON")->required();
  check->add_option("--trace", a.trace_file, "trace JSON");
  check->add_option("--seq", a.seq_file, "sequence JSON {initial, moves}");
  check->add_option("--cert", a.cert_file, "certificate JSON")->required();
  add_common(check);

  CLI::App* hard = app.add_subcommand("hard", "layered adversarial instance + rank-ratio scan");
  hard->add_option("--d", a.d, "number of layers");
  hard->add_option("--n1", a.n1, "first-layer size");
  hard->add_option("--blocks", a.blocks, "number of blocks");
  hard->add_option("--scan", a.scan, "block-aligned|full");
  add_common(hard);

  CLI::App* reduce = app.add_subcommand("reduce", "reduce a problem to a BFOP instance");
  reduce->add_option("--kind", a.kind, "max2sat|dcut|hopfield|coordgame")->required();
  reduce->add_option("--in", a.in_file, "input file (wcnf for max2sat, JSON otherwise)")
      ->required();
  add_common(reduce);

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo for the anti-concentration bound");
  mc->add_option("--in", a.in_file, "JSON {vectors, dists, eps?, samples?}")->required();
  mc->add_option("--eps", a.eps, "interval width (if absent from file)");
  mc->add_option("--samples", a.samples, "sample count (if absent from file)");
  add_common(mc);

  CLI::App* bench = app.add_subcommand("bench", "seeded experiment grid, CSV output");
  bench->add_option("--family", a.family, "complete|er|bounded");
  bench->add_option("--er-p", a.er_p, "edge probability for er");
  bench->add_option("--max-degree", a.max_degree, "degree cap for bounded");
  bench->add_option("--sizes", a.sizes, "node counts")->delimiter(',');
  bench->add_option("--phis", a.phis, "density bounds (>= 0.5)")->delimiter(',');
  bench->add_option("--pivot", a.pivot, "pivot rule: first|best|random");
  bench->add_option("--trials", a.trials, "trials per cell");
  bench->add_option("--threads", a.threads, "worker threads");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      if (a.graph_file.empty() == a.bfop_file.empty())
        throw ValidationError("run needs exactly one of --graph or --bfop");
      return cmd_run(a);
    }
    if (analyze->parsed() || extract_cmd->parsed() || check->parsed()) {
      if (a.trace_file.empty() && a.seq_file.empty())
        throw ValidationError("need --trace or --seq");
    }
    if (analyze->parsed()) return cmd_analyze(a);
    if (extract_cmd->parsed()) return cmd_extract(a);
    if (check->parsed()) return cmd_check_cert(a);
    if (hard->parsed()) return cmd_hard(a);
    if (reduce->parsed()) return cmd_reduce(a);
    if (mc->parsed()) return cmd_mc(a);
    if (bench->parsed()) return cmd_bench(a);
  } catch (const InternalInvariantError& e) {
    write_diagnostic(argc, argv, e.what(), a.out_path);
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
