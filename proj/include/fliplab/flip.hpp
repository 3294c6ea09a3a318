#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fliplab/instance.hpp"
#include "fliplab/numeric.hpp"
#include "fliplab/rng.hpp"

namespace fliplab {

/// Pivoting criteria. Ties always break toward the lowest node id so that a
/// run is a pure function of (instance, initial configuration, seed).
enum class PivotRule { FirstImprovement, BestImprovement, RandomImprovement };

inline std::int64_t default_step_cap(int n) {
  return 10 * static_cast<std::int64_t>(n) * n * n;
}

template <typename W>
struct FlipTraceT {
  Configuration initial;
  std::vector<int> moves;
  std::vector<W> gains;  // strictly positive, one per move
  Configuration final_cfg;
  bool terminated = false;
  std::int64_t steps = 0;
};

using FlipTrace = FlipTraceT<double>;

template <typename W>
bool is_local_optimum(const InstanceT<W>& inst, const Configuration& cfg) {
  if (!cfg.total(inst.node_count()))
    throw ValidationError("is_local_optimum requires a total configuration");
  const W eps = NumericTraits<W>::gain_epsilon();
  for (int v = 1; v <= inst.node_count(); ++v)
    if (flip_gain(inst, cfg, v) > eps) return false;
  return true;
}

/// Run FLIP until a local optimum or step_cap moves, recording per-step gains.
template <typename W>
FlipTraceT<W> run_flip(const InstanceT<W>& inst, const Configuration& init,
                       PivotRule rule, std::int64_t step_cap, std::uint64_t seed) {
  const int n = inst.node_count();
  if (!init.total(n)) throw ValidationError("run_flip requires a total configuration");
  if (step_cap < 0) throw ValidationError("step_cap must be nonnegative");

  const W eps = NumericTraits<W>::gain_epsilon();
  Rng rng(seed);
  FlipTraceT<W> trace;
  trace.initial = init;
  Configuration cfg = init;

  std::vector<int> improving;
  while (trace.steps < step_cap) {
    int chosen = 0;
    W chosen_gain(0);
    switch (rule) {
      case PivotRule::FirstImprovement:
        for (int v = 1; v <= n; ++v) {
          W g = flip_gain(inst, cfg, v);
          if (g > eps) {
            chosen = v;
            chosen_gain = g;
            break;
          }
        }
        break;
      case PivotRule::BestImprovement:
        for (int v = 1; v <= n; ++v) {
          W g = flip_gain(inst, cfg, v);
          if (g > eps && (chosen == 0 || g > chosen_gain)) {
            chosen = v;
            chosen_gain = g;
          }
        }
        break;
      case PivotRule::RandomImprovement:
        improving.clear();
        for (int v = 1; v <= n; ++v)
          if (flip_gain(inst, cfg, v) > eps) improving.push_back(v);
        if (!improving.empty()) {
          chosen = improving[rng.next_below(improving.size())];
          chosen_gain = flip_gain(inst, cfg, chosen);
        }
        break;
    }
    if (chosen == 0) {
      trace.terminated = true;
      break;
    }
    cfg.flip(chosen);
    trace.moves.push_back(chosen);
    trace.gains.push_back(chosen_gain);
    ++trace.steps;
  }
  if (trace.steps == step_cap && !trace.terminated)
    trace.terminated = is_local_optimum(inst, cfg);
  trace.final_cfg = cfg;
  return trace;
}

/// Minimum over all arcs of the trace of the summed two-endpoint gain; absent
/// when no node repeats. Used to locate near-eps-improving windows.
template <typename W>
std::optional<W> min_arc_gain(const FlipTraceT<W>& trace) {
  if (trace.moves.empty()) throw ValidationError("min_arc_gain requires a nonempty trace");
  std::optional<W> best;
  std::vector<int> last(1, -1);
  for (int k = 0; k < static_cast<int>(trace.moves.size()); ++k) {
    int v = trace.moves[k];
    if (v >= static_cast<int>(last.size())) last.resize(v + 1, -1);
    if (last[v] >= 0) {
      W s = trace.gains[last[v]] + trace.gains[k];
      if (!best || s < *best) best = s;
    }
    last[v] = k;
  }
  return best;
}

}  // namespace fliplab
