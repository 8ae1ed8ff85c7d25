#pragma once

#include <span>
#include <vector>

#include "vrestore/media/frame.hpp"

namespace vrestore {

// Square, odd-sided weight grid, row-major.
struct Kernel {
  int size = 1;
  std::vector<float> weights{1.f};

  Kernel() = default;
  Kernel(int side, std::vector<float> w);

  float operator()(int x, int y) const { return weights[std::size_t(y) * size + x]; }
  float sum() const;
};

Kernel gaussian_kernel(double sigma, int radius = -1);
// Uniform disc (defocus), normalized.
Kernel disc_kernel(double radius);
std::vector<float> gaussian_taps(double sigma, int radius = -1);

// Per-channel 2-D convolution with clamp-to-edge padding; output clamped to [0,1].
Frame convolve2d(const Frame& frame, const Kernel& kernel);

// Plane variants, unclamped.
Plane convolve(const Plane& p, const Kernel& kernel);
Plane convolve_separable(const Plane& p, std::span<const float> taps_x, std::span<const float> taps_y);
Plane gaussian_blur(const Plane& p, double sigma);
Plane box_mean(const Plane& p, int radius);
Plane min_filter(const Plane& p, int radius);
Plane median3(const Plane& p);

Frame gaussian_blur(const Frame& f, double sigma);

// Applies fn to each RGB channel plane and clamps the result.
template <typename Fn>
Frame map_channels(const Frame& f, Fn&& fn) {
  Frame out(f.width(), f.height());
  for (int c = 0; c < 3; ++c) out.set_channel(c, fn(f.channel(c)));
  return out;
}

}  // namespace vrestore
