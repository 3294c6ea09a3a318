#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fliplab/arcs.hpp"
#include "fliplab/flip.hpp"
#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"
#include "fliplab/rng.hpp"

namespace fliplab {

// ---------------------------------------------------------------------------
// Anti-concentration Monte Carlo
// ---------------------------------------------------------------------------

/// Exact linear-dependency finder over the rows. Returns coefficients c (not
/// all zero) with sum c_i * rows[i] = 0 when the rows are dependent.
inline std::optional<std::vector<Rational>> find_dependency(
    const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) return std::nullopt;
  const std::size_t dim = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != dim) throw ValidationError("vectors must share a dimension");
  // Echelon rows plus, for each, its expression in the original rows.
  std::vector<std::vector<Rational>> echelon;
  std::vector<std::vector<Rational>> combo;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Rational> v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = Rational(rows[i][j]);
    std::vector<Rational> c(rows.size(), Rational(0));
    c[i] = Rational(1);
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      std::size_t p = 0;
      while (p < dim && echelon[e][p] == 0) ++p;
      if (p == dim || v[p] == 0) continue;
      Rational f = v[p] / echelon[e][p];
      for (std::size_t j = 0; j < dim; ++j) v[j] -= f * echelon[e][j];
      for (std::size_t j = 0; j < rows.size(); ++j) c[j] -= f * combo[e][j];
    }
    bool zero = std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
    if (zero) return c;
    echelon.push_back(std::move(v));
    combo.push_back(std::move(c));
  }
  return std::nullopt;
}

struct MCReport {
  std::int64_t samples = 0;
  std::int64_t hits = 0;
  double empirical = 0.0;
  double bound = 0.0;           // (phi * eps)^k with phi the max density
  double ci_half_width = 0.0;   // 99% binomial half-width
};

/// Empirical frequency of the joint event <r_i, X> in [0, eps] for all i,
/// with X drawn coordinatewise from dists. The vectors must be linearly
/// independent; dependent inputs are refused with the dependency named.
inline MCReport mc_lemma_probability(const std::vector<std::vector<int>>& vectors,
                                     const std::vector<DistributionSpec>& dists, double eps,
                                     std::int64_t samples, std::uint64_t seed) {
  if (vectors.empty()) throw ValidationError("need at least one vector");
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (samples < 1) throw ValidationError("samples must be positive");
  const std::size_t dim = dists.size();
  for (const auto& r : vectors)
    if (r.size() != dim) throw ValidationError("vector dimension must match distribution count");
  if (auto dep = find_dependency(vectors)) {
    std::ostringstream msg;
    msg << "vectors are linearly dependent; certificate coefficients:";
    for (const Rational& c : *dep) msg << ' ' << c;
    throw ValidationError(msg.str());
  }

  MCReport rep;
  rep.samples = samples;
  double phi = 0.0;
  for (const auto& d : dists) phi = std::max(phi, d.density());
  rep.bound = std::pow(phi * eps, static_cast<double>(vectors.size()));

  Rng rng(seed);
  std::vector<double> x(dim);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < dim; ++j) x[j] = dists[j].sample(rng);
    bool all_in = true;
    for (const auto& r : vectors) {
      double ip = 0.0;
      for (std::size_t j = 0; j < dim; ++j) ip += r[j] * x[j];
      if (ip < 0.0 || ip > eps) {
        all_in = false;
        break;
      }
    }
    if (all_in) ++rep.hits;
  }
  rep.empirical = static_cast<double>(rep.hits) / static_cast<double>(samples);
  double p = rep.empirical;
  rep.ci_half_width = 2.576 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / samples);
  return rep;
}

// ---------------------------------------------------------------------------
// Smoothed-runtime experiment harness
// ---------------------------------------------------------------------------

enum class GraphFamily { Complete, ErdosRenyi, BoundedDegree };

inline std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::Complete: return "complete";
    case GraphFamily::ErdosRenyi: return "erdos-renyi";
    case GraphFamily::BoundedDegree: return "bounded-degree";
  }
  return "?";
}

inline std::string to_string(PivotRule r) {
  switch (r) {
    case PivotRule::FirstImprovement: return "first";
    case PivotRule::BestImprovement: return "best";
    case PivotRule::RandomImprovement: return "random";
  }
  return "?";
}

struct ExperimentPlan {
  GraphFamily family = GraphFamily::Complete;
  double er_p = 0.5;      // ErdosRenyi only
  int max_degree = 4;     // BoundedDegree only
  std::vector<int> sizes;
  std::vector<double> phis;  // density bounds; weights uniform on [-1/(2phi), 1/(2phi)]
  PivotRule rule = PivotRule::FirstImprovement;
  int trials = 1;
  std::uint64_t base_seed = 0;
};

struct ExperimentCell {
  GraphFamily family;
  int n = 0;
  double phi = 0.0;
  PivotRule rule;
  int trials = 0;
  std::int64_t max_steps = 0;
  double mean_steps = 0.0;
  std::int64_t p50_steps = 0;
  std::int64_t p90_steps = 0;
  int timeouts = 0;
};

inline DistributionSpec phi_distribution(double phi) {
  if (phi < 0.5) throw ValidationError("phi must be at least 1/2 for weights in [-1,1]");
  double h = 0.5 / phi;
  return DistributionSpec{-h, h};
}

/// Run the plan. Trials are indexed and seeded by derive_seed(base, cell,
/// trial), and results land in a per-trial slot, so the output is identical
/// for every thread count.
inline std::vector<ExperimentCell> run_experiment(const ExperimentPlan& plan, int threads = 1) {
  if (plan.trials < 1) throw ValidationError("trials must be at least 1");
  if (threads < 1) throw ValidationError("thread count must be at least 1");
  if (plan.sizes.empty() || plan.phis.empty())
    throw ValidationError("plan needs at least one size and one phi");
  for (double phi : plan.phis) phi_distribution(phi);  // validate up front

  struct CellSpec {
    int n;
    double phi;
  };
  std::vector<CellSpec> cells;
  for (int n : plan.sizes)
    for (double phi : plan.phis) cells.push_back({n, phi});

  auto run_trial = [&](int cell_idx, int trial) -> std::int64_t {
    const CellSpec& c = cells[cell_idx];
    std::uint64_t s = derive_seed(plan.base_seed, static_cast<std::uint64_t>(cell_idx),
                                  static_cast<std::uint64_t>(trial));
    Rng rng(derive_seed(s, 1));
    Graph g = plan.family == GraphFamily::Complete ? Graph::complete(c.n)
              : plan.family == GraphFamily::ErdosRenyi
                  ? Graph::erdos_renyi(c.n, plan.er_p, rng)
                  : Graph::bounded_degree(c.n, plan.max_degree, rng);
    DistributionSpec d = phi_distribution(c.phi);
    WeightedInstance base(g, std::vector<double>(g.edge_count(), 0.0),
                          std::vector<std::optional<DistributionSpec>>(g.edge_count(), d));
    WeightedInstance inst = sample_weights(base, derive_seed(s, 2));
    Rng init_rng(derive_seed(s, 3));
    Configuration init = Configuration::random(c.n, init_rng);
    FlipTrace tr = run_flip(inst, init, plan.rule, default_step_cap(c.n), derive_seed(s, 4));
    // Delegated invariants, re-asserted at scale.
    for (double gain : tr.gains)
      if (!(gain > NumericTraits<double>::gain_epsilon()))
        throw InternalInvariantError("experiment trial recorded a non-improving step");
    if (tr.terminated && !is_local_optimum(inst, tr.final_cfg))
      throw InternalInvariantError("experiment trial terminated off a local optimum");
    return tr.terminated ? tr.steps : -tr.steps;  // negative marks a step-cap hit
  };

  std::vector<std::vector<std::int64_t>> results(cells.size());
  for (auto& r : results) r.assign(plan.trials, 0);
  const std::int64_t total = static_cast<std::int64_t>(cells.size()) * plan.trials;
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t k = next.fetch_add(1);
      if (k >= total) return;
      int cell_idx = static_cast<int>(k / plan.trials);
      int trial = static_cast<int>(k % plan.trials);
      results[cell_idx][trial] = run_trial(cell_idx, trial);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<ExperimentCell> out;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    ExperimentCell cell;
    cell.family = plan.family;
    cell.n = cells[ci].n;
    cell.phi = cells[ci].phi;
    cell.rule = plan.rule;
    cell.trials = plan.trials;
    std::vector<std::int64_t> steps;
    double sum = 0.0;
    for (std::int64_t r : results[ci]) {
      if (r < 0) {
        ++cell.timeouts;
        r = -r;
      }
      steps.push_back(r);
      sum += static_cast<double>(r);
    }
    std::sort(steps.begin(), steps.end());
    cell.max_steps = steps.back();
    cell.mean_steps = sum / plan.trials;
    cell.p50_steps = steps[(steps.size() - 1) / 2];
    cell.p90_steps = steps[(steps.size() - 1) * 9 / 10];
    out.push_back(cell);
  }
  return out;
}

/// Fixed-column CSV for experiment results.
inline std::string experiment_csv(const std::vector<ExperimentCell>& cells) {
  std::ostringstream os;
  os << "family,n,phi,rule,trials,max_steps,mean_steps,p50_steps,p90_steps,timeouts\n";
  os.precision(17);
  for (const ExperimentCell& c : cells) {
    os << to_string(c.family) << ',' << c.n << ',' << c.phi << ',' << to_string(c.rule) << ','
       << c.trials << ',' << c.max_steps << ',' << c.mean_steps << ',' << c.p50_steps << ','
       << c.p90_steps << ',' << c.timeouts << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// eps-improving window census
// ---------------------------------------------------------------------------

/// Number of length-`window` substrings of the trace whose every arc has
/// summed endpoint gain in (0, eps].
template <typename W>
std::int64_t eps_improving_census(const FlipTraceT<W>& trace, W eps, int window) {
  if (window < 1) throw ValidationError("window must be at least 1");
  const int m = static_cast<int>(trace.moves.size());
  std::int64_t count = 0;
  for (int lo = 0; lo + window <= m; ++lo) {
    bool ok = true;
    std::map<int, int> last;
    for (int k = lo; k < lo + window && ok; ++k) {
      int v = trace.moves[k];
      auto it = last.find(v);
      if (it != last.end()) {
        W s = trace.gains[it->second] + trace.gains[k];
        if (!(s > W(0)) || s > eps) ok = false;
      }
      last[v] = k;
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace fliplab
