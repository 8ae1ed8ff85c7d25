#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vrestore/context.hpp"
#include "vrestore/degrade/kinds.hpp"
#include "vrestore/media/frame.hpp"

namespace vrestore {

using KindScores = std::array<double, kKindCount>;

struct DetectorReport {
  KindScores scores{};
  // Set for kinds scored through a proxy because no nominal target was known.
  std::array<bool, kKindCount> low_confidence{};
};

inline constexpr std::size_t kDetectorFrames = 16;

// Raw per-kind scores; larger always means "more degraded".
DetectorReport run_detectors(const Clip& clip, const NominalFormat& nominal, std::size_t max_frames = kDetectorFrames);

// Per-channel noise sigma from the MAD of an edge-insensitive Laplacian
// residual on the chroma-difference planes R-G and B-G.
double noise_score(const Frame& f);
// Median width in pixels of the strongest edges (contrast over peak
// gradient). Contrast-invariant.
double blur_score(const Plane& luma);
// Mean |step| across 8-aligned block boundaries relative to elsewhere, minus one.
double blockiness_score(const Plane& luma);
// 1 - mean HSV value.
double darkness_score(const Frame& f);
// Mean dark channel (channel minimum, 7x7 spatial minimum).
double dark_channel_score(const Frame& f);
// Percentage of pixels on thin bright transient strokes aligned with the
// rain direction. prev/next may be null (single-frame fallback).
double rain_score(const Frame& f, const Frame* prev, const Frame* next, double angle_deg = 75.0);
double lowres_score(const Clip& clip, const NominalFormat& nominal, bool& low_confidence);
double lowfps_score(const Clip& clip, const NominalFormat& nominal, bool& low_confidence);

Plane dark_channel(const Frame& f, int radius = 3);

}  // namespace vrestore
