#include "vrestore/toolbox/toolbox.hpp"

#include <algorithm>
#include <cmath>

#include "vrestore/error.hpp"
#include "vrestore/toolbox/ops.hpp"

namespace vrestore {

Toolbox::Toolbox(const Toolbox& o) : tools_(o.tools_), invocations_(o.invocations_.load()) {}

Toolbox& Toolbox::operator=(const Toolbox& o) {
  if (this != &o) {
    tools_ = o.tools_;
    invocations_ = o.invocations_.load();
  }
  return *this;
}

void Toolbox::add(Tool tool) {
  if (tool.name.empty() || !tool.transform) throw InvalidArgument("tool needs a name and a transform");
  if (find(tool.name)) throw InvalidArgument("duplicate tool name '" + tool.name + "'");
  if (tools_for(tool.target).size() >= kMaxToolsPerKind)
    throw InvalidArgument("kind " + std::string(to_string(tool.target)) + " already has " +
                          std::to_string(kMaxToolsPerKind) + " tools");
  tools_.push_back(std::move(tool));
}

void Toolbox::validate() const {
  for (auto k : kAllKinds)
    if (tools_for(k).empty()) throw ConfigurationError("no tool enabled for " + std::string(to_string(k)));
}

void Toolbox::configure(const nlohmann::json& config) {
  if (!config.is_object()) throw InvalidFormat("toolbox config must be a JSON object");
  if (config.contains("params")) {
    for (const auto& [name, overrides] : config.at("params").items()) {
      auto it = std::find_if(tools_.begin(), tools_.end(), [&](const Tool& t) { return t.name == name; });
      if (it == tools_.end()) throw InvalidArgument("toolbox config names unknown tool '" + name + "'");
      if (!overrides.is_object()) throw InvalidFormat("params for '" + name + "' must be an object");
      for (const auto& [key, value] : overrides.items()) {
        if (!it->params.contains(key)) throw InvalidArgument("tool '" + name + "' has no parameter '" + key + "'");
        it->params[key] = value;
      }
    }
  }
  if (config.contains("disable")) {
    for (const auto& n : config.at("disable")) {
      const auto name = n.get<std::string>();
      auto it = std::find_if(tools_.begin(), tools_.end(), [&](const Tool& t) { return t.name == name; });
      if (it == tools_.end()) throw InvalidArgument("toolbox config names unknown tool '" + name + "'");
      tools_.erase(it);
    }
  }
  validate();
}

std::vector<const Tool*> Toolbox::tools_for(DegradationKind k) const {
  std::vector<const Tool*> out;
  for (const auto& t : tools_)
    if (t.target == k) out.push_back(&t);
  return out;
}

const Tool* Toolbox::find(const std::string& name) const {
  for (const auto& t : tools_)
    if (t.name == name) return &t;
  return nullptr;
}

Clip Toolbox::apply(const Tool& tool, const Clip& clip, const ToolContext& ctx) const {
  if (clip.empty()) throw InvalidArgument("cannot apply " + tool.name + " to an empty clip");
  ++invocations_;
  return tool.transform(clip, ctx, tool.params);
}

namespace {

double num(const nlohmann::json& p, const char* key) { return p.at(key).get<double>(); }
int integer(const nlohmann::json& p, const char* key) { return p.at(key).get<int>(); }

std::pair<int, int> nominal_size(const ToolContext& ctx, const std::string& tool) {
  if (!ctx.nominal.has_resolution()) throw InvalidArgument(tool + " needs the nominal resolution");
  return {*ctx.nominal.width, *ctx.nominal.height};
}

int fps_factor(const Clip& clip, const ToolContext& ctx, const std::string& tool) {
  if (!ctx.nominal.fps) throw InvalidArgument(tool + " needs the nominal frame rate");
  return std::max(1, static_cast<int>(std::lround(*ctx.nominal.fps / clip.fps())));
}

Tool make(std::string name, DegradationKind target, double cost, nlohmann::json params, Tool::Transform fn) {
  return Tool{std::move(name), target, cost, std::move(params), std::move(fn)};
}

}  // namespace

Toolbox default_toolbox() {
  using K = DegradationKind;
  Toolbox tb;
  tb.add(make("gaussian-filter", K::Noise, 1.0, {{"sigma", 1.0}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return denoise_gaussian(c, num(p, "sigma"));
              }));
  tb.add(make("median-filter", K::Noise, 1.6, nlohmann::json::object(),
              [](const Clip& c, const ToolContext&, const nlohmann::json&) { return denoise_median(c); }));
  tb.add(make("bilateral-filter", K::Noise, 6.0,
              {{"radius", 2}, {"sigma_space", 1.5}, {"range_scale", 2.5}, {"min_range", 0.02}, {"max_range", 0.3}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return denoise_bilateral(c, integer(p, "radius"), num(p, "sigma_space"), num(p, "range_scale"),
                                         num(p, "min_range"), num(p, "max_range"));
              }));

  tb.add(make("unsharp-mask", K::Blur, 1.2, {{"amount", 1.0}, {"sigma", 1.5}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return unsharp_mask(c, num(p, "amount"), num(p, "sigma"));
              }));
  tb.add(make("richardson-lucy", K::Blur, 9.0, {{"iterations", 5}, {"psf_sigma", 2.0}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return richardson_lucy(c, integer(p, "iterations"), num(p, "psf_sigma"));
              }));

  tb.add(make("block-boundary-smoother", K::Compression, 0.4, {{"max_step", 0.12}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return deblock_smooth(c, num(p, "max_step"));
              }));
  tb.add(make("bilateral-deblock", K::Compression, 11.0, {{"radius", 3}, {"sigma_space", 2.0}, {"sigma_range", 0.08}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return bilateral_deblock(c, integer(p, "radius"), num(p, "sigma_space"), num(p, "sigma_range"));
              }));
  tb.add(make("quantization-constraint", K::Compression, 25.0, {{"iterations", 10}, {"smooth_sigma", 1.0}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return dequantize_pocs(c, integer(p, "iterations"), num(p, "smooth_sigma"));
              }));

  tb.add(make("gamma-lift", K::LowLight, 1.5, {{"target_mean", 0.58}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return gamma_lift(c, num(p, "target_mean"));
              }));
  tb.add(make("v-channel-gain+denoise", K::LowLight, 2.0,
              {{"target_mean", 0.58}, {"max_gain", 6.0}, {"denoise_sigma", 0.6}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return v_gain_denoise(c, num(p, "target_mean"), num(p, "max_gain"), num(p, "denoise_sigma"));
              }));

  tb.add(make("temporal-median", K::Rain, 0.5, nlohmann::json::object(),
              [](const Clip& c, const ToolContext&, const nlohmann::json&) { return temporal_median3(c); }));
  tb.add(make("directional-notch", K::Rain, 3.0, {{"angle_deg", 75.0}, {"min_excess", 0.03}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return directional_notch(c, num(p, "angle_deg"), num(p, "min_excess"));
              }));

  tb.add(make("dark-channel-dehaze", K::Haze, 6.0,
              {{"omega", 0.95}, {"t_min", 0.1}, {"patch_radius", 7}, {"guide_radius", 20}, {"guide_eps", 1e-3}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return dehaze_dark_channel(c, num(p, "omega"), num(p, "t_min"), integer(p, "patch_radius"),
                                           integer(p, "guide_radius"), num(p, "guide_eps"));
              }));
  tb.add(make("contrast-stretch", K::Haze, 0.5, {{"low_pct", 1.0}, {"high_pct", 99.0}},
              [](const Clip& c, const ToolContext&, const nlohmann::json& p) {
                return contrast_stretch(c, num(p, "low_pct"), num(p, "high_pct"));
              }));

  tb.add(make("bicubic-upsample", K::LowRes, 2.0, nlohmann::json::object(),
              [](const Clip& c, const ToolContext& ctx, const nlohmann::json&) {
                const auto [w, h] = nominal_size(ctx, "bicubic-upsample");
                return upsample_bicubic(c, w, h);
              }));
  tb.add(make("bicubic+unsharp", K::LowRes, 3.0, {{"amount", 0.6}, {"sigma", 1.0}},
              [](const Clip& c, const ToolContext& ctx, const nlohmann::json& p) {
                const auto [w, h] = nominal_size(ctx, "bicubic+unsharp");
                return upsample_sharpen(c, w, h, num(p, "amount"), num(p, "sigma"));
              }));

  tb.add(make("frame-blend-interp", K::LowFps, 0.3, nlohmann::json::object(),
              [](const Clip& c, const ToolContext& ctx, const nlohmann::json&) {
                return interpolate_blend(c, fps_factor(c, ctx, "frame-blend-interp"), ctx.nominal.frames);
              }));
  tb.add(make("frame-repeat", K::LowFps, 0.1, nlohmann::json::object(),
              [](const Clip& c, const ToolContext& ctx, const nlohmann::json&) {
                return repeat_frames(c, fps_factor(c, ctx, "frame-repeat"), ctx.nominal.frames);
              }));
  return tb;
}

}  // namespace vrestore
