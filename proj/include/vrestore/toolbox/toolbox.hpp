#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrestore/context.hpp"
#include "vrestore/degrade/kinds.hpp"
#include "vrestore/media/frame.hpp"

namespace vrestore {

struct ToolContext {
  NominalFormat nominal;
};

struct Tool {
  using Transform = std::function<Clip(const Clip&, const ToolContext&, const nlohmann::json& params)>;

  std::string name;
  DegradationKind target = DegradationKind::Noise;
  double cost_hint = 1.0;  // relative cost per frame
  nlohmann::json params = nlohmann::json::object();
  Transform transform;
};

inline constexpr std::size_t kMaxToolsPerKind = 4;

// Tools grouped by target kind, kept in registration order. Counts every
// apply() call; copies start with the source's count.
class Toolbox {
 public:
  Toolbox() = default;
  Toolbox(const Toolbox& o);
  Toolbox& operator=(const Toolbox& o);

  // Throws InvalidArgument on a duplicate name or a fifth tool for one kind.
  void add(Tool tool);
  // Throws ConfigurationError unless every kind has at least one tool.
  void validate() const;

  // Config document: {"disable": [names], "params": {name: {key: value}}}.
  // Unknown tool names are rejected.
  void configure(const nlohmann::json& config);

  const std::vector<Tool>& tools() const { return tools_; }
  std::vector<const Tool*> tools_for(DegradationKind k) const;
  const Tool* find(const std::string& name) const;

  // Runs the tool and counts the invocation. Throws InvalidArgument on an
  // empty clip or when the tool needs a nominal format the context lacks.
  Clip apply(const Tool& tool, const Clip& clip, const ToolContext& ctx) const;

  std::uint64_t invocations() const { return invocations_.load(); }
  void reset_invocations() { invocations_ = 0; }

 private:
  std::vector<Tool> tools_;
  mutable std::atomic<std::uint64_t> invocations_{0};
};

// Classical stand-ins for the restoration models, 2 to 3 per kind.
Toolbox default_toolbox();

}  // namespace vrestore
