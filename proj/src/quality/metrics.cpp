#include "vrestore/quality/metrics.hpp"

#include <cmath>

#include "vrestore/error.hpp"
#include "vrestore/media/filter.hpp"
#include "vrestore/media/resample.hpp"
#include "vrestore/parallel.hpp"

namespace vrestore {

namespace {

void require_same_shape(const Clip& a, const Clip& b) {
  if (!same_shape(a, b))
    throw InvalidArgument("clip shapes differ: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          "x" + std::to_string(a.size()) + " vs " + std::to_string(b.width()) + "x" +
                          std::to_string(b.height()) + "x" + std::to_string(b.size()));
}

double psnr_from_mse(double m) {
  if (m <= 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / m));
}

}  // namespace

double mse(const Frame& test, const Frame& reference) {
  if (test.width() != reference.width() || test.height() != reference.height())
    throw InvalidArgument("frame shapes differ");
  const auto a = test.data(), b = reference.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = double(a[i]) - double(b[i]);
    sum += d * d;
  }
  return a.empty() ? 0.0 : sum / double(a.size());
}

double psnr(const Frame& test, const Frame& reference) { return psnr_from_mse(mse(test, reference)); }

std::vector<double> psnr_per_frame(const Clip& test, const Clip& reference) {
  require_same_shape(test, reference);
  std::vector<double> out(test.size());
  parallel_for(test.size(), [&](std::size_t i) { out[i] = psnr(test[i], reference[i]); });
  return out;
}

double psnr(const Clip& test, const Clip& reference) {
  require_same_shape(test, reference);
  std::vector<double> per(test.size());
  parallel_for(test.size(), [&](std::size_t i) { per[i] = mse(test[i], reference[i]); });
  double sum = 0.0;
  for (double m : per) sum += m;
  return psnr_from_mse(sum / double(per.size()));
}

double ssim(const Frame& test, const Frame& reference) {
  if (test.width() != reference.width() || test.height() != reference.height())
    throw InvalidArgument("frame shapes differ");
  constexpr int kRadius = 5;
  constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  const auto taps = gaussian_taps(1.5, kRadius);
  const Plane x = test.luma(), y = reference.luma();
  const int w = x.width, h = x.height;
  // Frames smaller than the window fall back to one window clipped to the frame.
  const int x0 = std::min(kRadius, (w - 1) / 2), y0 = std::min(kRadius, (h - 1) / 2);
  const int x1 = std::max(x0 + 1, w - kRadius), y1 = std::max(y0 + 1, h - kRadius);
  double total = 0.0;
  std::size_t count = 0;
  for (int cy = y0; cy < y1; ++cy) {
    for (int cx = x0; cx < x1; ++cx) {
      double wsum = 0, mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int dy = -kRadius; dy <= kRadius; ++dy) {
        const int yy = cy + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -kRadius; dx <= kRadius; ++dx) {
          const int xx = cx + dx;
          if (xx < 0 || xx >= w) continue;
          const double wt = double(taps[dy + kRadius]) * taps[dx + kRadius];
          const double a = x(xx, yy), b = y(xx, yy);
          wsum += wt;
          mx += wt * a;
          my += wt * b;
          sxx += wt * a * a;
          syy += wt * b * b;
          sxy += wt * a * b;
        }
      }
      mx /= wsum;
      my /= wsum;
      // Each moment uses the same expression for x and y, so ssim(x, x) is
      // exactly 1 in floating point.
      const double vx = sxx / wsum - mx * mx, vy = syy / wsum - my * my, cxy = sxy / wsum - mx * my;
      total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / double(count);
}

std::vector<double> ssim_per_frame(const Clip& test, const Clip& reference) {
  require_same_shape(test, reference);
  std::vector<double> out(test.size());
  parallel_for(test.size(), [&](std::size_t i) { out[i] = ssim(test[i], reference[i]); });
  return out;
}

double ssim(const Clip& test, const Clip& reference) {
  const auto per = ssim_per_frame(test, reference);
  double sum = 0.0;
  for (double s : per) sum += s;
  return sum / double(per.size());
}

Clip align_to_reference(const Clip& clip, const Clip& reference) {
  if (clip.empty() || reference.empty()) throw InvalidArgument("cannot align an empty clip");
  if (same_shape(clip, reference)) return clip;
  const std::size_t n_src = clip.size(), n_ref = reference.size();
  std::vector<Frame> frames(n_ref);
  parallel_for(n_ref, [&](std::size_t i) {
    const Frame& src = clip[std::min(n_src - 1, i * n_src / n_ref)];
    frames[i] = (src.width() == reference.width() && src.height() == reference.height())
                    ? src
                    : resample_bicubic(src, reference.width(), reference.height());
  });
  return Clip(clip.id(), reference.fps(), std::move(frames));
}

}  // namespace vrestore
