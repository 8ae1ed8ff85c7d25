#pragma once

#include <cstdint>
#include <string>

#include "vrestore/media/frame.hpp"

namespace vrestore {

struct SceneOptions {
  int width = 320;
  int height = 180;
  int frames = 16;
  double fps = 30.0;
  std::uint64_t seed = 1;
};

// Deterministic synthetic ground-truth clip: saturated smooth background,
// oriented mid-frequency texture and a handful of slowly moving shapes.
Clip make_scene_clip(const SceneOptions& options, std::string id);

}  // namespace vrestore
