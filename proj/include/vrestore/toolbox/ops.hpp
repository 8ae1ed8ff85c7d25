#pragma once

#include <cstddef>
#include <optional>

#include "vrestore/media/frame.hpp"

namespace vrestore {

// Restoration operators behind the default tools. Frame-local operators run
// frame-parallel; all are deterministic.

Frame bilateral(const Frame& f, int radius, double sigma_space, double sigma_range);

Clip denoise_gaussian(const Clip& clip, double sigma);
Clip denoise_median(const Clip& clip);
// Range sigma = range_scale * estimated noise sigma, clamped to [min_range, max_range].
Clip denoise_bilateral(const Clip& clip, int radius, double sigma_space, double range_scale, double min_range,
                       double max_range);

Clip unsharp_mask(const Clip& clip, double amount, double sigma);
// Multiplicative RL deconvolution with a Gaussian PSF.
Clip richardson_lucy(const Clip& clip, int iterations, double psf_sigma);

// Pulls the two sides of every 8-aligned block boundary toward each other
// (weights 3/8, 2/8, 1/8 over three pixels) when the step is below max_step.
Clip deblock_smooth(const Clip& clip, double max_step);
Clip bilateral_deblock(const Clip& clip, int radius, double sigma_space, double sigma_range);

// Scale s such that the clip's 8x8 block-DCT coefficients (full-range
// YCbCr, grid at the frame origin) sit on the lattice of the standard JPEG
// tables times s. Empty when no scale fits, i.e. the clip shows no trace of
// that quantizer.
std::optional<double> estimate_jpeg_scale(const Clip& clip);
// Quantization-constrained reconstruction: alternately smooths each YCbCr
// plane and projects its block-DCT coefficients back into the quantization
// bins they were observed in. Returns the input when no quantizer is found.
Clip dequantize_pocs(const Clip& clip, int iterations, double smooth_sigma);

// HSV value gamma chosen so the clip's mean V maps to target_mean.
Clip gamma_lift(const Clip& clip, double target_mean);
// Linear V gain to target_mean (capped at max_gain), then Gaussian smoothing of V.
Clip v_gain_denoise(const Clip& clip, double target_mean, double max_gain, double denoise_sigma);

// Per-pixel median over a 3-frame window; the window slides inward at the
// clip ends. Clips shorter than 3 frames are returned unchanged.
Clip temporal_median3(const Clip& clip);
// Replaces pixels brighter than the median across the streak direction by
// more than min_excess with that median.
Clip directional_notch(const Clip& clip, double angle_deg, double min_excess);

// Dark-channel-prior dehazing with guided-filter refinement of the
// transmission; airlight estimated once per clip.
Clip dehaze_dark_channel(const Clip& clip, double omega, double t_min, int patch_radius, int guide_radius,
                         double guide_eps);
// Per-channel linear stretch of the [low_pct, high_pct] percentiles to [0,1].
Clip contrast_stretch(const Clip& clip, double low_pct, double high_pct);

Clip upsample_bicubic(const Clip& clip, int width, int height);
Clip upsample_sharpen(const Clip& clip, int width, int height, double amount, double sigma);

// Inserts factor-1 blends between neighbors: (n-1)*factor+1 frames, then
// pads with the last frame (or trims) to `frames`, default n*factor.
Clip interpolate_blend(const Clip& clip, int factor, std::optional<std::size_t> frames = std::nullopt);
// Repeats every frame factor times, then pads or trims like interpolate_blend.
Clip repeat_frames(const Clip& clip, int factor, std::optional<std::size_t> frames = std::nullopt);

}  // namespace vrestore
