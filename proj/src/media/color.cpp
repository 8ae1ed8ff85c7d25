#include "vrestore/media/color.hpp"

#include <algorithm>
#include <cmath>

#include "vrestore/error.hpp"

namespace vrestore {

void rgb_to_hsv_pixel(float r, float g, float b, float& h, float& s, float& v) {
  const float mx = std::max({r, g, b});
  const float mn = std::min({r, g, b});
  const float delta = mx - mn;
  v = mx;
  s = mx > 0.f ? delta / mx : 0.f;
  if (delta <= 0.f) {
    h = 0.f;
    return;
  }
  float hh;
  if (mx == r) {
    hh = (g - b) / delta;
    if (hh < 0.f) hh += 6.f;
  } else if (mx == g) {
    hh = (b - r) / delta + 2.f;
  } else {
    hh = (r - g) / delta + 4.f;
  }
  h = hh / 6.f;
  if (h >= 1.f) h -= 1.f;
}

void hsv_to_rgb_pixel(float h, float s, float v, float& r, float& g, float& b) {
  if (s <= 0.f) {
    r = g = b = v;
    return;
  }
  const float hh = (h - std::floor(h)) * 6.f;
  const int sector = std::min(5, static_cast<int>(hh));
  const float f = hh - sector;
  const float p = v * (1.f - s);
  const float q = v * (1.f - s * f);
  const float t = v * (1.f - s * (1.f - f));
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
}

namespace {

template <typename Fn>
Frame map_pixels(const Frame& in, Fn&& fn) {
  if (in.channels() != 3) throw InvalidFormat("colour conversion needs 3 channels");
  Frame out(in.width(), in.height());
  auto src = in.data();
  auto dst = out.mutable_data();
  for (std::size_t i = 0; i < in.pixel_count(); ++i) {
    fn(src[3 * i], src[3 * i + 1], src[3 * i + 2], dst[3 * i], dst[3 * i + 1], dst[3 * i + 2]);
  }
  out.clamp();
  return out;
}

}  // namespace

Frame rgb_to_hsv(const Frame& rgb) { return map_pixels(rgb, rgb_to_hsv_pixel); }

Frame hsv_to_rgb(const Frame& hsv) { return map_pixels(hsv, hsv_to_rgb_pixel); }

}  // namespace vrestore
