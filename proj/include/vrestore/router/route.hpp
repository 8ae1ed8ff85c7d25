#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vrestore/degrade/kinds.hpp"
#include "vrestore/identify/profile.hpp"
#include "vrestore/router/knowledge.hpp"

namespace vrestore {

enum class Strategy { Reverse, Random, Expert, ZeroShot, Experience, Ours };

inline constexpr std::array<Strategy, 6> kAllStrategies = {Strategy::Reverse,  Strategy::Random,     Strategy::Expert,
                                                           Strategy::ZeroShot, Strategy::Experience, Strategy::Ours};

std::string_view to_string(Strategy s);
// "reverse", "random", "expert", "zero-shot", "experience", "ours".
Strategy parse_strategy(std::string_view name);
// Only Ours rolls back and reroutes after a failed subtask.
constexpr bool uses_rollback(Strategy s) { return s == Strategy::Ours; }

struct Route {
  KindList subtasks;
  std::string origin;
};

// Removal order: codec artifacts first, then sampling, sensor, optics and
// scene effects. Ties cannot occur; every kind has its own rank.
int removal_rank(DegradationKind k);
// The shipped expert table: any kind set sorted by removal_rank.
KindList expert_order(KindList kinds);

using FailedPrefixCache = std::set<KindList>;

// True when `remaining` can be ordered after `prefix` without any prefix of
// the result being cached.
bool completion_exists(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed);
// Kinds k in `remaining` for which prefix+k is uncached and completable.
KindList allowed_next(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed);

class RoutePredictor {
 public:
  virtual ~RoutePredictor() = default;
  virtual std::string name() const = 0;
  // Must return a member of allowed_next(prefix, remaining, failed).
  virtual DegradationKind next_step(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                                    const KnowledgeBase& kb) = 0;
};

// Knowledge-base ranking first (rules whose sequence extends the prefix),
// then the expert order.
class HeuristicPredictor : public RoutePredictor {
 public:
  std::string name() const override { return "heuristic"; }
  DegradationKind next_step(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                            const KnowledgeBase& kb) override;
};

// Test fixture: fixed preference (expert order, or a seeded shuffle per
// call) plus a success coin with probability p for synthetic executors.
class ScriptedPredictor : public RoutePredictor {
 public:
  explicit ScriptedPredictor(double p = 1.0, std::uint64_t seed = 0, bool shuffle = false);
  std::string name() const override { return "scripted"; }
  DegradationKind next_step(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                            const KnowledgeBase& kb) override;
  bool draw_success();
  double p() const { return p_; }

 private:
  double p_;
  bool shuffle_;
  std::mt19937_64 rng_;
};

// POST /next {"active": [...], "prefix": [...], "failed_prefixes": [[...]], "rules": {...}}
// -> {"next": kind}. Replies that are not allowed raise ServiceUnavailable.
class ExternalPredictor : public RoutePredictor {
 public:
  explicit ExternalPredictor(std::string base_url, std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));
  std::string name() const override { return "external"; }
  DegradationKind next_step(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                            const KnowledgeBase& kb) override;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

// Uses `primary` until it raises ServiceUnavailable, then `fallback`.
class FallbackPredictor : public RoutePredictor {
 public:
  FallbackPredictor(std::unique_ptr<RoutePredictor> primary, std::unique_ptr<RoutePredictor> fallback);
  std::string name() const override { return primary_->name(); }
  DegradationKind next_step(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                            const KnowledgeBase& kb) override;
  // Messages of the failures that triggered a fallback, oldest first.
  const std::vector<std::string>& fallback_events() const { return events_; }

 private:
  std::unique_ptr<RoutePredictor> primary_, fallback_;
  std::vector<std::string> events_;
};

// Completes prefix over `remaining` by asking the predictor step by step.
// Throws RouteExhausted when no completion avoids the cache.
KindList complete_route(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                        const KnowledgeBase& kb, RoutePredictor& predictor);

// Throws NothingToPlan when the profile has no active kind.
Route plan(const DegradationProfile& profile, Strategy strategy, const KnowledgeBase& kb, RoutePredictor& predictor,
           std::uint64_t seed = 0);
Route plan(const KindList& active, Strategy strategy, const KnowledgeBase& kb, RoutePredictor& predictor,
           std::uint64_t seed = 0);

// Opaque handle to a saved pipeline state; the router never looks inside.
using SnapshotId = std::size_t;

struct CompletedStep {
  DegradationKind kind;
  std::string tool;
};

struct RouteState {
  Route remaining;
  std::vector<CompletedStep> completed;
  FailedPrefixCache failed;
  std::size_t rollback_count = 0;
  // snapshots[i] is the state before completed[i] ran.
  std::vector<SnapshotId> snapshots;

  KindList completed_kinds() const;
  void complete_head(std::string tool, SnapshotId before);
};

struct RerouteResult {
  Route route;
  std::size_t rolled_back = 0;
  // State to resume from when rolled_back > 0.
  std::optional<SnapshotId> restore;
};

inline constexpr std::size_t kDefaultRollbackDepth = 1;

// Caches completed+failed_kind, then plans over the still-remaining kinds.
// When no uncached completion exists at the current depth, pops up to
// max_rollback_depth completed steps (their kinds rejoin the plan) before
// giving up with RouteExhausted. Throws InvalidArgument unless failed_kind
// heads state.remaining.
RerouteResult reroute(RouteState& state, DegradationKind failed_kind, RoutePredictor& predictor,
                      const KnowledgeBase& kb, std::size_t max_rollback_depth = kDefaultRollbackDepth);

}  // namespace vrestore
