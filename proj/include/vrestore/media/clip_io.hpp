#pragma once

#include <filesystem>

#include "vrestore/media/frame.hpp"

namespace vrestore {

// Clip directory layout: manifest.json {"id", "fps", "frames": [...]} plus
// binary PPM (P6, maxval 255) frames named 000000.ppm, 000001.ppm, ...
Clip load_clip(const std::filesystem::path& dir);
void save_clip(const Clip& clip, const std::filesystem::path& dir);

Frame read_ppm(const std::filesystem::path& file);
void write_ppm(const Frame& frame, const std::filesystem::path& file);

// Round-trips a frame through 8-bit quantization (what save/load does).
Frame quantize8(const Frame& frame);
Clip quantize8(const Clip& clip);

}  // namespace vrestore
