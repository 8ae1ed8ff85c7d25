#include "vrestore/media/filter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "vrestore/error.hpp"

namespace vrestore {

Kernel::Kernel(int side, std::vector<float> w) : size(side), weights(std::move(w)) {
  if (side < 1 || side % 2 == 0) throw InvalidArgument("kernel side must be odd");
  if (weights.size() != std::size_t(side) * side) throw InvalidArgument("kernel weight count mismatch");
}

float Kernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.f); }

std::vector<float> gaussian_taps(double sigma, int radius) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian sigma must be positive");
  if (radius < 0) radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> w(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += w[i + radius];
  }
  std::vector<float> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) taps[i] = static_cast<float>(w[i] / total);
  return taps;
}

Kernel gaussian_kernel(double sigma, int radius) {
  const auto taps = gaussian_taps(sigma, radius);
  const int side = static_cast<int>(taps.size());
  std::vector<float> w(std::size_t(side) * side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) w[std::size_t(y) * side + x] = taps[y] * taps[x];
  return Kernel(side, std::move(w));
}

Kernel disc_kernel(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("disc radius must be positive");
  const int r = static_cast<int>(std::ceil(radius));
  const int side = 2 * r + 1;
  std::vector<float> w(std::size_t(side) * side, 0.f);
  // 4x4 supersampling gives anti-aliased disc edges.
  double total = 0.0;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      int inside = 0;
      for (int sy = 0; sy < 4; ++sy)
        for (int sx = 0; sx < 4; ++sx) {
          const double dx = x - r + (sx + 0.5) / 4.0 - 0.5;
          const double dy = y - r + (sy + 0.5) / 4.0 - 0.5;
          if (dx * dx + dy * dy <= radius * radius) ++inside;
        }
      w[std::size_t(y) * side + x] = inside / 16.f;
      total += inside / 16.0;
    }
  }
  for (float& v : w) v = static_cast<float>(v / total);
  return Kernel(side, std::move(w));
}

Plane convolve(const Plane& p, const Kernel& k) {
  Plane out(p.width, p.height);
  const int r = k.size / 2;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int ky = 0; ky < k.size; ++ky) {
        const int sy = std::clamp(y + ky - r, 0, p.height - 1);
        for (int kx = 0; kx < k.size; ++kx) {
          const int sx = std::clamp(x + kx - r, 0, p.width - 1);
          acc += double(k(kx, ky)) * p(sx, sy);
        }
      }
      out(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

Plane convolve_separable(const Plane& p, std::span<const float> tx, std::span<const float> ty) {
  if (tx.size() % 2 == 0 || ty.size() % 2 == 0) throw InvalidArgument("separable taps must be odd-sized");
  const int rx = static_cast<int>(tx.size() / 2);
  const int ry = static_cast<int>(ty.size() / 2);
  Plane tmp(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int i = -rx; i <= rx; ++i) acc += double(tx[i + rx]) * p(std::clamp(x + i, 0, p.width - 1), y);
      tmp(x, y) = static_cast<float>(acc);
    }
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double acc = 0.0;
      for (int i = -ry; i <= ry; ++i) acc += double(ty[i + ry]) * tmp(x, std::clamp(y + i, 0, p.height - 1));
      out(x, y) = static_cast<float>(acc);
    }
  return out;
}

Plane gaussian_blur(const Plane& p, double sigma) {
  const auto taps = gaussian_taps(sigma);
  return convolve_separable(p, taps, taps);
}

Frame gaussian_blur(const Frame& f, double sigma) {
  const auto taps = gaussian_taps(sigma);
  return map_channels(f, [&](const Plane& p) { return convolve_separable(p, taps, taps); });
}

Plane box_mean(const Plane& p, int radius) {
  const std::vector<float> taps(2 * radius + 1, 1.f / (2 * radius + 1));
  return convolve_separable(p, taps, taps);
}

namespace {

// Sliding-window minimum along one axis (monotone deque), clamp-to-edge.
void min_1d(const float* in, float* out, int n, int stride, int radius) {
  std::deque<int> dq;
  auto value = [&](int i) { return in[std::size_t(std::clamp(i, 0, n - 1)) * stride]; };
  for (int i = -radius; i < n + radius; ++i) {
    while (!dq.empty() && value(dq.back()) >= value(i)) dq.pop_back();
    dq.push_back(i);
    const int centre = i - radius;
    if (centre < 0) continue;
    while (dq.front() < centre - radius) dq.pop_front();
    out[std::size_t(centre) * stride] = value(dq.front());
  }
}

}  // namespace

Plane min_filter(const Plane& p, int radius) {
  Plane tmp(p.width, p.height), out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    min_1d(&p.v[std::size_t(y) * p.width], &tmp.v[std::size_t(y) * p.width], p.width, 1, radius);
  for (int x = 0; x < p.width; ++x) min_1d(&tmp.v[x], &out.v[x], p.height, p.width, radius);
  return out;
}

Plane median3(const Plane& p) {
  Plane out(p.width, p.height);
  float win[9];
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) win[n++] = p.clamped(x + dx, y + dy);
      std::nth_element(win, win + 4, win + 9);
      out(x, y) = win[4];
    }
  return out;
}

Frame convolve2d(const Frame& frame, const Kernel& kernel) {
  if (kernel.size % 2 == 0) throw InvalidArgument("kernel side must be odd");
  return map_channels(frame, [&](const Plane& p) { return convolve(p, kernel); });
}

}  // namespace vrestore
