#include "vrestore/media/scene.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vrestore/error.hpp"
#include "vrestore/media/color.hpp"

namespace vrestore {

namespace {

struct Grating {
  double fx, fy, phase, amp, drift;
};

struct Shape {
  bool disc;
  double x0, y0, vx, vy, size_a, size_b;
  float h, s, v;
};

double smoothstep_edge(double signed_dist) {
  // signed_dist > 0 outside; one-pixel anti-aliased edge.
  return std::clamp(0.5 - signed_dist, 0.0, 1.0);
}

}  // namespace

Clip make_scene_clip(const SceneOptions& opt, std::string id) {
  if (opt.width < 8 || opt.height < 8 || opt.frames < 1) throw InvalidArgument("scene too small");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;

  const double hue0 = u(rng), hue_dx = 0.25 + 0.3 * u(rng), hue_dy = 0.15 * u(rng);
  const double pan_x = 0.4 + 0.4 * u(rng), pan_y = 0.2 * (u(rng) - 0.5);

  std::vector<Grating> gratings;
  for (int i = 0; i < 3; ++i) {
    // Periods 7..18 px; orientation kept away from near-vertical strokes.
    const double period = 7.0 + 11.0 * u(rng);
    const double theta = std::numbers::pi * (-0.25 + 0.5 * u(rng));
    gratings.push_back({std::cos(theta) / period, std::sin(theta) / period, two_pi * u(rng),
                        0.035 + 0.03 * u(rng), 0.02 + 0.03 * u(rng)});
  }

  std::vector<Shape> shapes;
  const int n_shapes = 6;
  for (int i = 0; i < n_shapes; ++i) {
    Shape s;
    s.disc = (i % 2) == 0;
    s.x0 = opt.width * (0.1 + 0.8 * u(rng));
    s.y0 = opt.height * (0.1 + 0.8 * u(rng));
    s.vx = (u(rng) - 0.5) * 2.0;
    s.vy = (u(rng) - 0.5) * 1.2;
    s.size_a = opt.height * (0.06 + 0.1 * u(rng));
    s.size_b = opt.height * (0.05 + 0.08 * u(rng));
    s.h = static_cast<float>(u(rng));
    s.s = static_cast<float>(0.6 + 0.35 * u(rng));
    // Alternate dark and bright shapes so the scene has both.
    s.v = static_cast<float>(i % 3 == 0 ? 0.12 + 0.1 * u(rng) : 0.65 + 0.3 * u(rng));
    shapes.push_back(s);
  }

  std::vector<Frame> frames;
  frames.reserve(opt.frames);
  for (int t = 0; t < opt.frames; ++t) {
    Frame f(opt.width, opt.height);
    auto data = f.mutable_data();
    for (int y = 0; y < opt.height; ++y) {
      for (int x = 0; x < opt.width; ++x) {
        const double px = x + pan_x * t, py = y + pan_y * t;
        const double nx = px / opt.width, ny = py / opt.height;
        double h = hue0 + hue_dx * nx + hue_dy * std::sin(two_pi * ny);
        h -= std::floor(h);
        double s = 0.72 + 0.15 * std::sin(two_pi * (0.7 * nx + 1.3 * ny));
        double v = 0.58 + 0.12 * std::sin(two_pi * (1.1 * nx - 0.6 * ny) + 1.0);
        for (const auto& g : gratings)
          v += g.amp * std::sin(two_pi * (g.fx * px + g.fy * py) + g.phase + g.drift * t);
        float r, gg, b;
        hsv_to_rgb_pixel(static_cast<float>(h), static_cast<float>(std::clamp(s, 0.0, 1.0)),
                         static_cast<float>(std::clamp(v, 0.0, 1.0)), r, gg, b);
        for (const auto& sh : shapes) {
          const double cx = sh.x0 + sh.vx * t, cy = sh.y0 + sh.vy * t;
          double dist;
          if (sh.disc) {
            dist = std::hypot(x - cx, y - cy) - sh.size_a;
          } else {
            dist = std::max(std::abs(x - cx) - sh.size_a, std::abs(y - cy) - sh.size_b);
          }
          const double cover = smoothstep_edge(dist);
          if (cover <= 0.0) continue;
          float sr, sg, sb;
          hsv_to_rgb_pixel(sh.h, sh.s, sh.v, sr, sg, sb);
          r = static_cast<float>(r + cover * (sr - r));
          gg = static_cast<float>(gg + cover * (sg - gg));
          b = static_cast<float>(b + cover * (sb - b));
        }
        const std::size_t i = (std::size_t(y) * opt.width + x) * 3;
        data[i] = r;
        data[i + 1] = gg;
        data[i + 2] = b;
      }
    }
    f.clamp();
    frames.push_back(std::move(f));
  }
  return Clip(std::move(id), opt.fps, std::move(frames));
}

}  // namespace vrestore
