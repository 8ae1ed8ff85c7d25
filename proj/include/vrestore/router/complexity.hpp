#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vrestore {

// Tool invocations with a single tool per kind and n subtasks.
// Exhaustive search runs every ordering to completion: n * n!.
std::uint64_t t_full(int n);
// Permutation-tree search executes each tree node once: sum_{k=1..n} n!/(n-k)!.
std::uint64_t t_tree(int n);
// Predictor-guided search, expected: n/p + (1-p) n^2.
double t_ours(int n, double p);

struct SimulationStats {
  double mean = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  double runtime = 0.0;  // mean invocations * cost per invocation
  double exhausted_fraction = 0.0;
};

// Strategy names accepted by simulate_strategy.
const std::vector<std::string>& simulation_strategies();

// Monte-Carlo invocation counts against a synthetic executor whose every
// subtask attempt succeeds with probability p.
//   full, tree           deterministic counts of the two search baselines
//   reverse, random, expert, zero-shot, experience
//                        open loop: n invocations, no retries
//   ours                 predictor-guided loop: at each depth, attempts until
//                        one succeeds; a failure at depth i rolls back and
//                        replays, costing i further invocations (the
//                        executor keeps no snapshots)
//   ours-state           the reroute state machine itself with a scripted
//                        predictor, snapshots and depth-1 rollback; stops
//                        when the failed-prefix cache exhausts the route space
// Per-trial seeds derive from `seed`; results do not depend on the thread cap.
// Throws InvalidArgument for n outside [1,6], trials < 1, p outside (0,1] or
// an unknown strategy.
SimulationStats simulate_strategy(int n, const std::string& strategy, double p, std::size_t trials,
                                  std::uint64_t seed, double cost_per_invocation = 1.0);

}  // namespace vrestore
