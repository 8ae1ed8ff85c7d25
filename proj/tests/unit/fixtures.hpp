#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "vrestore/media/frame.hpp"
#include "vrestore/media/scene.hpp"

namespace vrestore::test {

inline Clip scene(int w = 96, int h = 64, int frames = 6, std::uint64_t seed = 3, const std::string& id = "gt") {
  return make_scene_clip({w, h, frames, 30.0, seed}, id);
}

// Desk-size scene; detector thresholds are calibrated at this size.
inline Clip desk_scene(int frames = 8, std::uint64_t seed = 1, const std::string& id = "gt0") {
  return make_scene_clip({320, 180, frames, 30.0, seed}, id);
}

inline Frame constant_frame(int w, int h, float v) { return Frame(w, h, v); }

inline Clip constant_clip(int w, int h, std::size_t n, float v, const std::string& id = "c") {
  return Clip(id, 30.0, std::vector<Frame>(n, Frame(w, h, v)));
}

inline Frame random_frame(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  std::vector<float> d(std::size_t(w) * h * 3);
  for (auto& x : d) x = u(rng);
  return Frame(w, h, std::move(d));
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("vrestore-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace vrestore::test
