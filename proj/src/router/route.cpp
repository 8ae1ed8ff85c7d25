#include "vrestore/router/route.hpp"

#include <algorithm>

#include "vrestore/error.hpp"
#include "vrestore/net/http.hpp"

namespace vrestore {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Reverse: return "reverse";
    case Strategy::Random: return "random";
    case Strategy::Expert: return "expert";
    case Strategy::ZeroShot: return "zero-shot";
    case Strategy::Experience: return "experience";
    case Strategy::Ours: return "ours";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies)
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

int removal_rank(DegradationKind k) {
  switch (k) {
    case DegradationKind::Compression: return 0;
    case DegradationKind::LowFps: return 1;
    case DegradationKind::LowRes: return 2;
    case DegradationKind::Noise: return 3;
    case DegradationKind::Blur: return 4;
    case DegradationKind::LowLight: return 5;
    case DegradationKind::Rain: return 6;
    case DegradationKind::Haze: return 7;
  }
  return 8;
}

KindList expert_order(KindList kinds) {
  std::sort(kinds.begin(), kinds.end(),
            [](DegradationKind a, DegradationKind b) { return removal_rank(a) < removal_rank(b); });
  return kinds;
}

namespace {

bool contains(const KindList& list, DegradationKind k) { return std::find(list.begin(), list.end(), k) != list.end(); }

KindList without(const KindList& list, DegradationKind k) {
  KindList out;
  for (auto x : list)
    if (x != k) out.push_back(x);
  return out;
}

}  // namespace

bool completion_exists(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed) {
  if (failed.count(prefix)) return false;
  if (remaining.empty()) return true;
  KindList next = prefix;
  for (auto k : remaining) {
    next.push_back(k);
    if (completion_exists(next, without(remaining, k), failed)) return true;
    next.pop_back();
  }
  return false;
}

KindList allowed_next(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed) {
  KindList out;
  KindList next = prefix;
  for (auto k : remaining) {
    next.push_back(k);
    if (completion_exists(next, without(remaining, k), failed)) out.push_back(k);
    next.pop_back();
  }
  return out;
}

DegradationKind HeuristicPredictor::next_step(const KindList& prefix, const KindList& remaining,
                                              const FailedPrefixCache& failed, const KnowledgeBase& kb) {
  const KindList allowed = allowed_next(prefix, remaining, failed);
  if (allowed.empty()) throw RouteExhausted("no uncached continuation");
  KindList all = prefix;
  all.insert(all.end(), remaining.begin(), remaining.end());
  if (const auto* rules = kb.rules_for(all)) {
    for (const auto& rule : *rules) {
      if (rule.successes == 0 || rule.sequence.size() <= prefix.size()) continue;
      if (!std::equal(prefix.begin(), prefix.end(), rule.sequence.begin())) continue;
      if (contains(allowed, rule.sequence[prefix.size()])) return rule.sequence[prefix.size()];
    }
  }
  return expert_order(allowed).front();
}

ScriptedPredictor::ScriptedPredictor(double p, std::uint64_t seed, bool shuffle) : p_(p), shuffle_(shuffle), rng_(seed) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("scripted success probability must lie in (0,1]");
}

DegradationKind ScriptedPredictor::next_step(const KindList& prefix, const KindList& remaining,
                                             const FailedPrefixCache& failed, const KnowledgeBase&) {
  const KindList allowed = allowed_next(prefix, remaining, failed);
  if (allowed.empty()) throw RouteExhausted("no uncached continuation");
  if (shuffle_) return allowed[rng_() % allowed.size()];
  return expert_order(allowed).front();
}

bool ScriptedPredictor::draw_success() {
  if (p_ >= 1.0) return true;
  // 53 random bits -> uniform [0,1).
  const double u = double(rng_() >> 11) * 0x1.0p-53;
  return u < p_;
}

ExternalPredictor::ExternalPredictor(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

DegradationKind ExternalPredictor::next_step(const KindList& prefix, const KindList& remaining,
                                             const FailedPrefixCache& failed, const KnowledgeBase& kb) {
  nlohmann::json cached = nlohmann::json::array();
  for (const auto& f : failed) cached.push_back(kinds_to_json(f));
  const nlohmann::json body{{"active", kinds_to_json(remaining)},
                            {"prefix", kinds_to_json(prefix)},
                            {"failed_prefixes", cached},
                            {"rules", kb.to_json().at("rules")}};
  const auto reply = post_json(base_url_, "/next", body, timeout_);
  DegradationKind k;
  try {
    k = parse_kind(reply.at("next").get<std::string>());
  } catch (const std::exception& e) {
    throw ServiceUnavailable(std::string("malformed predictor reply: ") + e.what());
  }
  if (!contains(allowed_next(prefix, remaining, failed), k))
    throw ServiceUnavailable("predictor proposed " + std::string(to_string(k)) + ", which is inactive or cached");
  return k;
}

FallbackPredictor::FallbackPredictor(std::unique_ptr<RoutePredictor> primary, std::unique_ptr<RoutePredictor> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

DegradationKind FallbackPredictor::next_step(const KindList& prefix, const KindList& remaining,
                                             const FailedPrefixCache& failed, const KnowledgeBase& kb) {
  try {
    return primary_->next_step(prefix, remaining, failed, kb);
  } catch (const ServiceUnavailable& e) {
    events_.push_back(e.what());
    return fallback_->next_step(prefix, remaining, failed, kb);
  }
}

KindList complete_route(const KindList& prefix, const KindList& remaining, const FailedPrefixCache& failed,
                        const KnowledgeBase& kb, RoutePredictor& predictor) {
  KindList path = prefix, rest = remaining, route;
  while (!rest.empty()) {
    const KindList allowed = allowed_next(path, rest, failed);
    if (allowed.empty()) throw RouteExhausted("every ordering of the remaining subtasks is cached as failed");
    const DegradationKind k = predictor.next_step(path, rest, failed, kb);
    if (!contains(allowed, k))
      throw InvalidArgument("predictor " + predictor.name() + " proposed a disallowed step " +
                            std::string(to_string(k)));
    path.push_back(k);
    route.push_back(k);
    rest = without(rest, k);
  }
  return route;
}

Route plan(const DegradationProfile& profile, Strategy strategy, const KnowledgeBase& kb, RoutePredictor& predictor,
           std::uint64_t seed) {
  return plan(profile.active_kinds(), strategy, kb, predictor, seed);
}

Route plan(const KindList& active_in, Strategy strategy, const KnowledgeBase& kb, RoutePredictor& predictor,
           std::uint64_t seed) {
  if (active_in.empty()) throw NothingToPlan("no active degradation to plan for");
  KindList active;
  for (auto k : kAllKinds)
    if (contains(active_in, k)) active.push_back(k);
  Route r{{}, std::string(to_string(strategy))};
  switch (strategy) {
    case Strategy::Reverse: {
      r.subtasks = expert_order(active);
      std::reverse(r.subtasks.begin(), r.subtasks.end());
      break;
    }
    case Strategy::Random: {
      r.subtasks = active;
      std::mt19937_64 rng(seed);
      // Fisher-Yates with plain modulo so the order is the same on every
      // standard library.
      for (std::size_t i = r.subtasks.size(); i > 1; --i) std::swap(r.subtasks[i - 1], r.subtasks[rng() % i]);
      break;
    }
    case Strategy::Expert: r.subtasks = expert_order(active); break;
    case Strategy::ZeroShot: r.subtasks = complete_route({}, active, {}, KnowledgeBase{}, predictor); break;
    case Strategy::Experience:
    case Strategy::Ours: {
      if (auto top = kb.top_sequence(active))
        r.subtasks = *top;
      else
        r.subtasks = complete_route({}, active, {}, kb, predictor);
      break;
    }
  }
  return r;
}

KindList RouteState::completed_kinds() const {
  KindList out;
  for (const auto& c : completed) out.push_back(c.kind);
  return out;
}

void RouteState::complete_head(std::string tool, SnapshotId before) {
  if (remaining.subtasks.empty()) throw InvalidArgument("no subtask left to complete");
  completed.push_back({remaining.subtasks.front(), std::move(tool)});
  snapshots.push_back(before);
  remaining.subtasks.erase(remaining.subtasks.begin());
}

RerouteResult reroute(RouteState& state, DegradationKind failed_kind, RoutePredictor& predictor,
                      const KnowledgeBase& kb, std::size_t max_rollback_depth) {
  if (state.remaining.subtasks.empty() || state.remaining.subtasks.front() != failed_kind)
    throw InvalidArgument("reroute: failed kind must head the remaining route");
  KindList prefix = state.completed_kinds();
  KindList rest = state.remaining.subtasks;
  KindList failed_prefix = prefix;
  failed_prefix.push_back(failed_kind);
  state.failed.insert(failed_prefix);

  RerouteResult result;
  for (;;) {
    if (completion_exists(prefix, rest, state.failed)) {
      result.route = {complete_route(prefix, rest, state.failed, kb, predictor), "reroute"};
      state.remaining = result.route;
      return result;
    }
    if (result.rolled_back >= max_rollback_depth || state.completed.empty())
      throw RouteExhausted("no uncached route remains within rollback depth " + std::to_string(max_rollback_depth));
    rest.insert(rest.begin(), state.completed.back().kind);
    prefix.pop_back();
    result.restore = state.snapshots.back();
    state.completed.pop_back();
    state.snapshots.pop_back();
    ++state.rollback_count;
    ++result.rolled_back;
  }
}

}  // namespace vrestore
