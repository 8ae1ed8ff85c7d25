#include "vrestore/router/complexity.hpp"

#include <algorithm>
#include <random>

#include "vrestore/degrade/dataset.hpp"
#include "vrestore/error.hpp"
#include "vrestore/parallel.hpp"
#include "vrestore/router/route.hpp"

namespace vrestore {

namespace {

void require_n(int n, int max_n) {
  if (n < 1 || n > max_n) throw InvalidArgument("n must lie in [1, " + std::to_string(max_n) + "]");
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= std::uint64_t(i);
  return f;
}

bool coin(std::mt19937_64& rng, double p) { return p >= 1.0 || double(rng() >> 11) * 0x1.0p-53 < p; }

std::uint64_t run_ours(int n, double p, std::mt19937_64& rng) {
  std::uint64_t inv = 0;
  for (int depth = 1; depth <= n; ++depth) {
    for (;;) {
      ++inv;
      if (coin(rng, p)) break;
      inv += std::uint64_t(depth);
    }
  }
  return inv;
}

std::uint64_t run_state_machine(int n, double p, std::uint64_t seed, bool& exhausted) {
  ScriptedPredictor predictor(p, seed);
  KnowledgeBase kb;
  KindList kinds(kAllKinds.begin(), kAllKinds.begin() + n);
  RouteState state;
  state.remaining = plan(kinds, Strategy::Ours, kb, predictor);
  std::uint64_t inv = 0;
  SnapshotId next_snapshot = 0;
  exhausted = false;
  while (!state.remaining.subtasks.empty()) {
    ++inv;
    if (predictor.draw_success()) {
      state.complete_head("tool", next_snapshot++);
      continue;
    }
    try {
      reroute(state, state.remaining.subtasks.front(), predictor, kb);
    } catch (const RouteExhausted&) {
      exhausted = true;
      break;
    }
  }
  return inv;
}

}  // namespace

std::uint64_t t_full(int n) {
  require_n(n, 20);
  return std::uint64_t(n) * factorial(n);
}

std::uint64_t t_tree(int n) {
  require_n(n, 20);
  std::uint64_t total = 0, level = 1;
  for (int k = 1; k <= n; ++k) {
    level *= std::uint64_t(n - k + 1);  // n!/(n-k)!
    total += level;
  }
  return total;
}

double t_ours(int n, double p) {
  require_n(n, 1000000);
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
  return n / p + (1.0 - p) * double(n) * n;
}

const std::vector<std::string>& simulation_strategies() {
  static const std::vector<std::string> names = {"full",      "tree",       "reverse", "random",    "expert",
                                                 "zero-shot", "experience", "ours",    "ours-state"};
  return names;
}

SimulationStats simulate_strategy(int n, const std::string& strategy, double p, std::size_t trials,
                                  std::uint64_t seed, double cost_per_invocation) {
  require_n(n, 6);
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
  const auto& names = simulation_strategies();
  if (std::find(names.begin(), names.end(), strategy) == names.end())
    throw InvalidArgument("unknown simulation strategy '" + strategy + "'");

  std::vector<std::uint64_t> counts(trials);
  std::vector<char> exhausted(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    const std::uint64_t trial_seed = mix_seed(seed, t);
    if (strategy == "full") {
      counts[t] = t_full(n);
    } else if (strategy == "tree") {
      counts[t] = t_tree(n);
    } else if (strategy == "ours") {
      std::mt19937_64 rng(trial_seed);
      counts[t] = run_ours(n, p, rng);
    } else if (strategy == "ours-state") {
      bool ex = false;
      counts[t] = run_state_machine(n, p, trial_seed, ex);
      exhausted[t] = ex;
    } else {
      counts[t] = std::uint64_t(n);
    }
  });

  SimulationStats s;
  s.min = *std::min_element(counts.begin(), counts.end());
  s.max = *std::max_element(counts.begin(), counts.end());
  double sum = 0.0;
  for (auto c : counts) sum += double(c);
  s.mean = sum / double(trials);
  s.runtime = s.mean * cost_per_invocation;
  s.exhausted_fraction = double(std::count(exhausted.begin(), exhausted.end(), 1)) / double(trials);
  return s;
}

}  // namespace vrestore
