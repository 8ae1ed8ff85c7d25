#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vrestore/degrade/kinds.hpp"
#include "vrestore/media/frame.hpp"

namespace vrestore {

enum class NoiseModel { Gaussian, Poisson };
enum class BlurModel { Gaussian, Disc };

struct NoiseParams {
  NoiseModel model = NoiseModel::Gaussian;
  double sigma = 0.05;
  double photon_scale = 128.0;  // Poisson: counts per unit intensity
};
struct BlurParams {
  BlurModel model = BlurModel::Gaussian;
  double sigma = 2.0;
  double radius = 4.0;
};
struct CompressionParams {
  double quant_scale = 4.0;  // multiplier on the base JPEG tables
};
struct LowLightParams {
  double gain = 0.4;
  double noise_sigma = 0.004;
};
struct RainParams {
  double density = 0.006;  // streak seeds per pixel
  int length = 15;
  double angle_deg = 75.0;
  double intensity = 0.5;
};
struct HazeParams {
  double beta_dmax = 1.5;
  double airlight = 0.9;
};
struct LowResParams {
  int factor = 3;
};
struct LowFpsParams {
  int step = 4;
};

using DegradationParams = std::variant<NoiseParams, BlurParams, CompressionParams, LowLightParams, RainParams,
                                       HazeParams, LowResParams, LowFpsParams>;

struct DegradationSpec {
  DegradationKind kind = DegradationKind::Noise;
  Severity severity = Severity::Medium;
  DegradationParams params;
  std::uint64_t seed = 0;
};

// Severity -> parameter table. Values are implementation constants.
DegradationParams default_params(DegradationKind kind, Severity severity);
DegradationSpec make_spec(DegradationKind kind, Severity severity, std::uint64_t seed = 0);

// Throws InvalidArgument when the spec is unusable.
void validate(const DegradationSpec& spec);

nlohmann::json to_json(const DegradationSpec& spec);
DegradationSpec spec_from_json(const nlohmann::json& j);

Clip apply_degradation(const Clip& clip, const DegradationSpec& spec);

// Physical acquisition order: scene (LowLight, Rain, Haze), optics (Blur),
// sensor (Noise), sampling (LowRes, LowFps), codec (Compression).
KindList canonical_mixed_order(KindList kinds);
int acquisition_group(DegradationKind kind);

struct GroundTruthLabel {
  std::string clip_id;
  std::vector<DegradationSpec> specs;  // in applied order
  std::string gt_clip_id;

  KindList kinds() const;
};

nlohmann::json to_json(const GroundTruthLabel& label);
GroundTruthLabel label_from_json(const nlohmann::json& j);

// Reorders specs canonically and applies them left to right.
std::pair<Clip, GroundTruthLabel> compose_mixed(const Clip& clip, std::vector<DegradationSpec> specs,
                                                std::string degraded_id);

// Standard 8x8 JPEG quantization tables (luminance, chrominance), row-major.
const std::array<int, 64>& jpeg_luma_table();
const std::array<int, 64>& jpeg_chroma_table();

}  // namespace vrestore
