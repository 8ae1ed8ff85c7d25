#include "vrestore/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "vrestore/degrade/dataset.hpp"
#include "vrestore/error.hpp"

namespace vrestore {

using nlohmann::json;

namespace {

json nominal_to_json(const NominalFormat& n) {
  json j = json::object();
  if (n.width) j["width"] = *n.width;
  if (n.height) j["height"] = *n.height;
  if (n.fps) j["fps"] = *n.fps;
  if (n.frames) j["frames"] = *n.frames;
  return j;
}

NominalFormat nominal_from_json(const json& j) {
  NominalFormat n;
  if (j.contains("width")) n.width = j.at("width").get<int>();
  if (j.contains("height")) n.height = j.at("height").get<int>();
  if (j.contains("fps")) n.fps = j.at("fps").get<double>();
  if (j.contains("frames")) n.frames = j.at("frames").get<std::size_t>();
  return n;
}

json step_to_json(const AppliedStep& s) {
  return {{"kind", std::string(to_string(s.kind))}, {"tool", s.tool}, {"params", s.params}};
}

bool contains(const KindList& list, DegradationKind k) { return std::find(list.begin(), list.end(), k) != list.end(); }

std::string sequence_key(const KindList& seq) {
  std::string s;
  for (auto k : seq) {
    if (!s.empty()) s += '>';
    s += to_string(k);
  }
  return s;
}

struct State {
  Clip clip;
  std::optional<std::size_t> parent;
  std::optional<AppliedStep> step;
  double score = 0.0;
};

// One run's agent wiring, fallbacks and trace.
class Session {
 public:
  Session(const Agents& agents, const RunInputs& inputs, std::vector<json>& trace)
      : agents_(agents), inputs_(inputs), trace_(trace) {
    if (!agents.identifier || !agents.assessor || !agents.predictor)
      throw ConfigurationError("identifier, assessor and predictor are all required");
    identifier_ = agents.identifier;
    assessor_ = agents.assessor;
    if (auto* fb = dynamic_cast<FallbackPredictor*>(agents.predictor)) fallback_predictor_ = fb;
  }

  Identifier& identifier() { return *identifier_; }
  IdentifyContext identify_context() const { return {inputs_.nominal, inputs_.reference}; }

  DegradationProfile identify(const Clip& clip) {
    for (;;) {
      try {
        return identifier_->identify(clip, identify_context());
      } catch (const ServiceUnavailable& e) {
        if (!agents_.fallback_identifier || identifier_ == agents_.fallback_identifier)
          throw ConfigurationError(std::string("identifier unavailable and no fallback: ") + e.what());
        event({{"event", "fallback"}, {"component", "identifier"}, {"message", e.what()}});
        identifier_ = agents_.fallback_identifier;
      }
    }
  }

  double score(const Clip& clip, std::optional<DegradationKind> subtask) {
    for (;;) {
      try {
        return assessor_->score(clip, {inputs_.nominal, inputs_.reference, subtask});
      } catch (const ServiceUnavailable& e) {
        if (!agents_.fallback_assessor || assessor_ == agents_.fallback_assessor)
          throw ConfigurationError(std::string("assessor unavailable and no fallback: ") + e.what());
        event({{"event", "fallback"}, {"component", "assessor"}, {"message", e.what()}});
        assessor_ = agents_.fallback_assessor;
      }
    }
  }

  RoutePredictor& predictor() { return *agents_.predictor; }

  // Logs predictor fallbacks raised since the last call.
  void flush_predictor_events() {
    if (!fallback_predictor_) return;
    const auto& ev = fallback_predictor_->fallback_events();
    for (; predictor_events_seen_ < ev.size(); ++predictor_events_seen_)
      event({{"event", "fallback"}, {"component", "predictor"}, {"message", ev[predictor_events_seen_]}});
  }

  void event(json e) { trace_.push_back(std::move(e)); }

 private:
  const Agents& agents_;
  const RunInputs& inputs_;
  std::vector<json>& trace_;
  Identifier* identifier_;
  Assessor* assessor_;
  FallbackPredictor* fallback_predictor_ = nullptr;
  std::size_t predictor_events_seen_ = 0;
};

json kinds_json(const KindList& kinds) { return kinds_to_json(kinds); }

// Keeps planned kinds that are still active, then appends newly active kinds
// that were neither planned nor already handled.
KindList refresh_plan(const KindList& remaining, const KindList& handled, const DegradationProfile& profile,
                      KindList& appended) {
  KindList out;
  for (auto k : remaining)
    if (profile.active(k)) out.push_back(k);
  KindList fresh;
  for (auto k : profile.active_kinds())
    if (!contains(out, k) && !contains(handled, k)) fresh.push_back(k);
  for (auto k : expert_order(fresh)) {
    out.push_back(k);
    appended.push_back(k);
  }
  return out;
}

}  // namespace

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Complete: return "complete";
    case RunStatus::Exhausted: return "exhausted";
    case RunStatus::Capped: return "capped";
  }
  return "?";
}

json RunConfig::to_json() const {
  json j = {{"strategy", std::string(vrestore::to_string(strategy))},
            {"seed", seed},
            {"rollback_depth", rollback_depth},
            {"record_experience", record_experience},
            {"timestamp", timestamp}};
  if (iteration_cap) j["iteration_cap"] = *iteration_cap;
  if (success_threshold) j["success_threshold"] = std::string(vrestore::to_string(*success_threshold));
  if (route) j["route"] = kinds_to_json(*route);
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidFormat("run config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "strategy") c.strategy = parse_strategy(v.get<std::string>());
      else if (key == "iteration_cap") c.iteration_cap = v.get<std::size_t>();
      else if (key == "success_threshold") c.success_threshold = parse_severity(v.get<std::string>());
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "route") c.route = kinds_from_json(v);
      else if (key == "rollback_depth") c.rollback_depth = v.get<std::size_t>();
      else if (key == "record_experience") c.record_experience = v.get<bool>();
      else if (key == "timestamp") c.timestamp = v.get<std::int64_t>();
      else throw InvalidFormat("unknown run config key '" + key + "'");
    } catch (const json::exception& e) {
      throw InvalidFormat("run config key '" + key + "': " + e.what());
    }
  }
  return c;
}

std::size_t default_iteration_cap(std::size_t n_active) { return 3 * n_active + 4; }

std::size_t select_best(const std::vector<double>& scores) {
  if (scores.empty()) throw InvalidArgument("select_best: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

std::size_t select_best(const std::vector<Candidate>& candidates) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(c.score);
  return select_best(scores);
}

RestorationRun restore(const Clip& clip, const RunConfig& config, const Agents& agents, const Toolbox& toolbox,
                       KnowledgeBase* kb, const RunInputs& inputs) {
  if (clip.empty()) throw InvalidArgument("restore: empty clip");
  toolbox.validate();

  RestorationRun run;
  Session s(agents, inputs, run.trace);
  s.identifier().reset();
  const Severity threshold = config.success_threshold.value_or(s.identifier().success_threshold());
  const KnowledgeBase empty_kb;
  const KnowledgeBase& knowledge = kb ? *kb : empty_kb;
  const ToolContext tool_ctx{inputs.nominal};

  s.event({{"event", "start"},
           {"clip", clip.id()},
           {"frames", clip.size()},
           {"width", clip.width()},
           {"height", clip.height()},
           {"fps", clip.fps()},
           {"nominal", nominal_to_json(inputs.nominal)},
           {"config", config.to_json()},
           {"identifier", std::string(to_string(s.identifier().kind()))},
           {"assessor", std::string(to_string(agents.assessor->kind()))},
           {"predictor", s.predictor().name()}});

  std::vector<State> states;
  states.push_back({clip, std::nullopt, std::nullopt, s.score(clip, std::nullopt)});
  std::size_t current = 0;

  run.initial_profile = s.identify(clip);
  s.event({{"event", "identify"}, {"state", 0}, {"profile", run.initial_profile.to_json()}});
  const KindList initial = run.initial_profile.active_kinds();
  run.cap = config.iteration_cap.value_or(default_iteration_cap(initial.size()));

  std::vector<std::pair<DegradationKind, Severity>> degradations;
  for (auto k : initial) degradations.emplace_back(k, run.initial_profile.of(k));

  RouteState route;
  bool any_failure = false;
  if (!initial.empty()) {
    if (config.route) {
      KindList fixed;
      for (auto k : *config.route)
        if (run.initial_profile.active(k) && !contains(fixed, k)) fixed.push_back(k);
      KindList missing;
      for (auto k : initial)
        if (!contains(fixed, k)) missing.push_back(k);
      for (auto k : expert_order(missing)) fixed.push_back(k);
      route.remaining = {fixed, "fixed"};
    } else {
      route.remaining = plan(initial, config.strategy, knowledge, s.predictor(), config.seed);
    }
    s.flush_predictor_events();
    s.event({{"event", "plan"}, {"route", kinds_json(route.remaining.subtasks)}, {"origin", route.remaining.origin}});
  }

  KindList handled;  // kinds whose subtask ran in open loop, or committed
  while (!route.remaining.subtasks.empty()) {
    if (run.iterations >= run.cap) {
      run.status = RunStatus::Capped;
      break;
    }
    const DegradationKind k = route.remaining.subtasks.front();
    const std::size_t step = ++run.iterations;
    const auto tools = toolbox.tools_for(k);

    std::vector<Clip> outputs;
    std::vector<double> scores;
    outputs.reserve(tools.size());
    for (const Tool* tool : tools) {
      outputs.push_back(toolbox.apply(*tool, states[current].clip, tool_ctx));
      ++run.tool_invocations;
      scores.push_back(s.score(outputs.back(), k));
      s.event({{"event", "invoke"},
               {"step", step},
               {"kind", std::string(to_string(k))},
               {"tool", tool->name},
               {"score", scores.back()}});
    }
    const std::size_t best = select_best(scores);
    const Tool& chosen = *tools[best];
    s.event({{"event", "select"},
             {"step", step},
             {"kind", std::string(to_string(k))},
             {"tool", chosen.name},
             {"index", best},
             {"score", scores[best]}});

    s.identifier().observe_step(k, states[current].clip, outputs[best], s.identify_context());
    const DegradationProfile after = s.identify(outputs[best]);
    const bool success = level(after.of(k)) <= level(threshold);
    s.event({{"event", "identify"}, {"step", step}, {"profile", after.to_json()}});

    if (success || !uses_rollback(config.strategy)) {
      if (!success) any_failure = true;
      states.push_back({std::move(outputs[best]), current, AppliedStep{k, chosen.name, chosen.params}, scores[best]});
      route.complete_head(chosen.name, current);
      current = states.size() - 1;
      handled.push_back(k);
      s.event({{"event", "commit"},
               {"step", step},
               {"kind", std::string(to_string(k))},
               {"tool", chosen.name},
               {"success", success},
               {"state", current}});
      KindList appended;
      const KindList before = route.remaining.subtasks;
      route.remaining.subtasks = refresh_plan(route.remaining.subtasks, handled, after, appended);
      for (auto a : appended) degradations.emplace_back(a, after.of(a));
      if (route.remaining.subtasks != before)
        s.event({{"event", "replan"}, {"route", kinds_json(route.remaining.subtasks)}, {"appended", kinds_json(appended)}});
      continue;
    }

    s.identifier().undo_step(k);
    s.event({{"event", "fail"}, {"step", step}, {"kind", std::string(to_string(k))}, {"tool", chosen.name}});
    const auto popped_from = route.completed.size();
    std::vector<CompletedStep> undone;
    try {
      const std::vector<CompletedStep> before = route.completed;
      RerouteResult rr = reroute(route, k, s.predictor(), knowledge, config.rollback_depth);
      s.flush_predictor_events();
      if (rr.rolled_back > 0) {
        undone.assign(before.begin() + std::ptrdiff_t(popped_from - rr.rolled_back), before.end());
        for (auto it = undone.rbegin(); it != undone.rend(); ++it) {
          s.identifier().undo_step(it->kind);
          handled.erase(std::find(handled.begin(), handled.end(), it->kind));
        }
        current = *rr.restore;
        KindList kinds;
        for (const auto& u : undone) kinds.push_back(u.kind);
        s.event({{"event", "rollback"}, {"kinds", kinds_json(kinds)}, {"state", current}});
        run.rollbacks += rr.rolled_back;
      }
      s.event({{"event", "reroute"},
               {"route", kinds_json(route.remaining.subtasks)},
               {"failed_prefixes", route.failed.size()}});
    } catch (const RouteExhausted& e) {
      s.flush_predictor_events();
      s.event({{"event", "exhausted"}, {"message", e.what()}});
      run.status = RunStatus::Exhausted;
      break;
    }
  }

  std::size_t out_state = current;
  if (!route.remaining.subtasks.empty()) {
    run.warning = true;
    std::vector<double> scores;
    for (const auto& st : states) scores.push_back(st.score);
    out_state = select_best(scores);
  }
  for (std::optional<std::size_t> i = out_state; i && states[*i].step; i = states[*i].parent)
    run.path.insert(run.path.begin(), *states[*i].step);
  run.output = states[out_state].clip;
  run.output_score = states[out_state].score;
  // Removal tracking must describe the output state, which may not be the
  // last one visited.
  s.identifier().reset();
  {
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> i = out_state; i && states[*i].parent; i = states[*i].parent) chain.push_back(*i);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      s.identifier().observe_step(states[*it].step->kind, states[*states[*it].parent].clip, states[*it].clip,
                                  s.identify_context());
  }
  run.final_profile = s.identify(run.output);

  json path = json::array();
  for (const auto& p : run.path) path.push_back(step_to_json(p));
  s.event({{"event", "output"},
           {"status", std::string(to_string(run.status))},
           {"state", out_state},
           {"score", run.output_score},
           {"iterations", run.iterations},
           {"cap", run.cap},
           {"tool_invocations", run.tool_invocations},
           {"rollbacks", run.rollbacks},
           {"final_active", kinds_json(run.final_active())},
           {"path", path}});

  if (kb && config.record_experience && !initial.empty()) {
    ExperienceRecord r;
    r.degradations = degradations;
    for (const auto& c : route.completed) {
      r.sequence.push_back(c.kind);
      r.tools.push_back(c.tool);
    }
    r.success = run.status == RunStatus::Complete && !any_failure && run.final_active().empty();
    r.score = run.output_score;
    r.timestamp = config.timestamp;
    r.id = clip.id() + ":" + std::string(to_string(config.strategy)) + ":" + sequence_key(r.sequence) + ":" +
           std::to_string(config.seed);
    kb->record(r);
    kb->consolidate();
    run.experience = r;
    s.event({{"event", "experience"}, {"id", r.id}, {"success", r.success}});
  }
  return run;
}

void write_trace(const std::vector<json>& trace, std::ostream& out) {
  for (const auto& e : trace) out << e.dump() << '\n';
}

void write_trace(const std::vector<json>& trace, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write trace " + file.string());
  write_trace(trace, out);
  if (!out) throw IoError(IoError::Code::WriteFailed, "cannot write trace " + file.string());
}

std::vector<json> read_trace(std::istream& in) {
  std::vector<json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw InvalidFormat("trace line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<json> read_trace(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError(IoError::Code::NotFound, "cannot open trace " + file.string());
  return read_trace(in);
}

Clip replay(const Clip& input, const std::vector<json>& trace, const Toolbox& toolbox) {
  const json* start = nullptr;
  const json* output = nullptr;
  for (const auto& e : trace) {
    const auto ev = e.value("event", std::string());
    if (ev == "start") start = &e;
    if (ev == "output") output = &e;
  }
  if (!start || !output) throw DataError("trace lacks start or output event");
  try {
    const ToolContext ctx{nominal_from_json(start->at("nominal"))};
    Clip clip = input;
    for (const auto& step : output->at("path")) {
      const auto name = step.at("tool").get<std::string>();
      const Tool* tool = toolbox.find(name);
      if (!tool) throw DataError("trace names unknown tool '" + name + "'");
      if (tool->params != step.at("params")) throw DataError("tool '" + name + "' is configured differently");
      clip = toolbox.apply(*tool, clip, ctx);
    }
    return clip;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed trace: ") + e.what());
  }
}

std::vector<ExperienceRecord> explore(const Clip& clip, const Agents& agents, const Toolbox& toolbox,
                                      KnowledgeBase& kb, const RunInputs& inputs, std::size_t alternates,
                                      std::uint64_t seed) {
  if (!agents.identifier || !agents.predictor) throw ConfigurationError("explore needs an identifier and predictor");
  agents.identifier->reset();
  const KindList active = agents.identifier->identify(clip, {inputs.nominal, inputs.reference}).active_kinds();
  if (active.empty()) return {};

  std::vector<KindList> orders{plan(active, Strategy::Experience, kb, *agents.predictor, seed).subtasks};
  std::size_t permutations = 1;
  for (std::size_t i = 2; i <= active.size(); ++i) permutations *= i;
  const std::size_t wanted = std::min(permutations, alternates + 1);
  std::mt19937_64 rng(seed);
  while (orders.size() < wanted) {
    KindList order = active;
    std::shuffle(order.begin(), order.end(), rng);
    if (std::find(orders.begin(), orders.end(), order) == orders.end()) orders.push_back(order);
  }

  std::vector<ExperienceRecord> added;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    RunConfig cfg;
    cfg.strategy = Strategy::Experience;
    cfg.route = orders[i];
    cfg.seed = mix_seed(seed, i);
    RestorationRun run = restore(clip, cfg, agents, toolbox, &kb, inputs);
    if (run.experience) added.push_back(*run.experience);
  }
  return added;
}

}  // namespace vrestore
