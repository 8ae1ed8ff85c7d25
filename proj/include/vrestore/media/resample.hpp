#pragma once

#include "vrestore/media/frame.hpp"

namespace vrestore {

// Catmull-Rom (a = -0.5) bicubic resampling with clamp-to-edge sampling.
// Downscaling widens the kernel by the scale factor (antialiased).
Frame resample_bicubic(const Frame& frame, int new_width, int new_height);
Plane resample_bicubic(const Plane& plane, int new_width, int new_height);

double cubic_weight(double x, double a = -0.5);

}  // namespace vrestore
