#pragma once

#include "vrestore/media/frame.hpp"

namespace vrestore {

// Hexcone RGB <-> HSV. Channel order in the HSV frame is (H, S, V) with
// H normalized to [0,1).
Frame rgb_to_hsv(const Frame& rgb);
Frame hsv_to_rgb(const Frame& hsv);

void rgb_to_hsv_pixel(float r, float g, float b, float& h, float& s, float& v);
void hsv_to_rgb_pixel(float h, float s, float v, float& r, float& g, float& b);

}  // namespace vrestore
