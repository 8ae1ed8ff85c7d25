#pragma once

#include <vector>

#include "vrestore/media/frame.hpp"

namespace vrestore {

inline constexpr double kPsnrCapDb = 100.0;

// 10*log10(1/MSE) over every sample of every frame; identical clips give
// kPsnrCapDb. Throws InvalidArgument unless same_shape(test, reference).
double psnr(const Clip& test, const Clip& reference);
double psnr(const Frame& test, const Frame& reference);
double mse(const Frame& test, const Frame& reference);

// Mean SSIM on Rec.601 luma: 11x11 Gaussian window (sigma 1.5), K1 0.01,
// K2 0.03, averaged over valid window positions, then over frames.
double ssim(const Clip& test, const Clip& reference);
double ssim(const Frame& test, const Frame& reference);

std::vector<double> psnr_per_frame(const Clip& test, const Clip& reference);
std::vector<double> ssim_per_frame(const Clip& test, const Clip& reference);

// Brings a clip onto the reference's geometry and frame count: bicubic
// resize, then output frame i takes source frame floor(i * n_src / n_ref).
// Returns the clip unchanged when shapes already match.
Clip align_to_reference(const Clip& clip, const Clip& reference);

}  // namespace vrestore
