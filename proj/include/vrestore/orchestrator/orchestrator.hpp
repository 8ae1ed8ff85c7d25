#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrestore/context.hpp"
#include "vrestore/identify/identifier.hpp"
#include "vrestore/quality/assess.hpp"
#include "vrestore/router/knowledge.hpp"
#include "vrestore/router/route.hpp"
#include "vrestore/toolbox/toolbox.hpp"

namespace vrestore {

struct RunConfig {
  Strategy strategy = Strategy::Ours;
  // Subtask executions allowed; default 3n + 4 for n initially active kinds.
  std::optional<std::size_t> iteration_cap;
  // Overrides the identifier's own success threshold when set.
  std::optional<Severity> success_threshold;
  std::uint64_t seed = 0;
  // Fixed initial plan instead of the strategy's; inactive kinds are
  // dropped, missing active kinds appended in expert order.
  std::optional<KindList> route;
  std::size_t rollback_depth = kDefaultRollbackDepth;
  // Record the run into the knowledge base (then consolidate).
  bool record_experience = true;
  std::int64_t timestamp = 0;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
};

std::size_t default_iteration_cap(std::size_t n_active);

// The collaborating agents for one run. Fallbacks take over permanently
// after the primary raises ServiceUnavailable; without one the run fails
// with ConfigurationError.
struct Agents {
  Identifier* identifier = nullptr;
  Identifier* fallback_identifier = nullptr;
  Assessor* assessor = nullptr;
  Assessor* fallback_assessor = nullptr;
  RoutePredictor* predictor = nullptr;
};

struct RunInputs {
  NominalFormat nominal;
  // Pristine reference for evaluation runs; passed to identifier and assessor.
  const Clip* reference = nullptr;
};

enum class RunStatus { Complete, Exhausted, Capped };
std::string_view to_string(RunStatus s);

struct AppliedStep {
  DegradationKind kind;
  std::string tool;
  nlohmann::json params;
};

struct RestorationRun {
  Clip output;
  RunStatus status = RunStatus::Complete;
  // True unless the plan emptied.
  bool warning = false;
  DegradationProfile initial_profile;
  DegradationProfile final_profile;
  // Tools leading from the input to the output, in order.
  std::vector<AppliedStep> path;
  std::size_t iterations = 0;
  std::size_t cap = 0;
  std::size_t tool_invocations = 0;
  std::size_t rollbacks = 0;
  double output_score = 0.0;
  std::vector<nlohmann::json> trace;
  // What was recorded into the knowledge base, if anything.
  std::optional<ExperienceRecord> experience;

  KindList final_active() const { return final_profile.active_kinds(); }
};

struct Candidate {
  const Clip* clip = nullptr;
  double score = 0.0;
};

// Index of the highest score; ties go to the earliest candidate.
// Throws InvalidArgument on an empty list.
std::size_t select_best(const std::vector<Candidate>& candidates);
std::size_t select_best(const std::vector<double>& scores);

// The closed loop: identify, plan, run every tool registered for the head
// subtask, keep the best-scoring output, re-identify and either advance or
// (for strategies with rollback) reroute. Other strategies run open loop:
// a failed subtask is logged, its best output carried forward and the kind
// is not retried. Kinds that become active during the run are appended in
// expert order; planned kinds that disappear are dropped. When the run ends
// with subtasks left (route space exhausted or cap reached) the output is
// the best-scoring state visited.
RestorationRun restore(const Clip& clip, const RunConfig& config, const Agents& agents, const Toolbox& toolbox,
                       KnowledgeBase* kb, const RunInputs& inputs);

// JSON lines, one event per line.
void write_trace(const std::vector<nlohmann::json>& trace, std::ostream& out);
void write_trace(const std::vector<nlohmann::json>& trace, const std::filesystem::path& file);
std::vector<nlohmann::json> read_trace(std::istream& in);
std::vector<nlohmann::json> read_trace(const std::filesystem::path& file);

// Re-applies the output path recorded in a trace to the input clip.
// Throws DataError when the trace has no output event or names a tool the
// toolbox lacks or configures differently.
Clip replay(const Clip& input, const std::vector<nlohmann::json>& trace, const Toolbox& toolbox);

// Self-exploration: runs `alternates` extra orderings beyond the planned
// one for the clip's active kinds (open loop, success judged by the
// identifier) and records each as experience. Returns the records added.
std::vector<ExperienceRecord> explore(const Clip& clip, const Agents& agents, const Toolbox& toolbox,
                                      KnowledgeBase& kb, const RunInputs& inputs, std::size_t alternates = 1,
                                      std::uint64_t seed = 0);

}  // namespace vrestore
