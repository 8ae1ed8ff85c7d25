#include "vrestore/toolbox/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "vrestore/degrade/degrade.hpp"
#include "vrestore/error.hpp"
#include "vrestore/identify/detectors.hpp"
#include "vrestore/media/color.hpp"
#include "vrestore/media/filter.hpp"
#include "vrestore/media/resample.hpp"
#include "vrestore/parallel.hpp"

namespace vrestore {

namespace {

template <typename Fn>
Clip per_frame(const Clip& clip, Fn&& fn, double fps = 0.0) {
  std::vector<Frame> out(clip.size());
  parallel_for(clip.size(), [&](std::size_t i) { out[i] = fn(clip[i]); });
  return Clip(clip.id(), fps > 0 ? fps : clip.fps(), std::move(out));
}

float bilinear(const Plane& p, double x, double y) {
  const int ix = static_cast<int>(std::floor(x)), iy = static_cast<int>(std::floor(y));
  const double fx = x - ix, fy = y - iy;
  return static_cast<float>((1 - fx) * (1 - fy) * p.clamped(ix, iy) + fx * (1 - fy) * p.clamped(ix + 1, iy) +
                            (1 - fx) * fy * p.clamped(ix, iy + 1) + fx * fy * p.clamped(ix + 1, iy + 1));
}

Frame unsharp_frame(const Frame& f, double amount, double sigma) {
  const Frame blurred = gaussian_blur(f, sigma);
  std::vector<float> out(f.data().size());
  const auto a = f.data(), b = blurred.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = float(a[i] + amount * (double(a[i]) - b[i]));
  Frame r(f.width(), f.height(), std::move(out));
  r.clamp();
  return r;
}

double mean_value(const Clip& clip) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i : sample_indices(clip.size(), kDetectorFrames)) {
    const auto d = clip[i].data();
    for (std::size_t p = 0; p < clip[i].pixel_count(); ++p)
      sum += std::max({d[3 * p], d[3 * p + 1], d[3 * p + 2]});
    n += clip[i].pixel_count();
  }
  return n ? sum / double(n) : 0.0;
}

template <typename Fn>
Frame map_value(const Frame& f, Fn&& fn) {
  Frame hsv = rgb_to_hsv(f);
  auto d = hsv.mutable_data();
  for (std::size_t i = 0; i < hsv.pixel_count(); ++i) d[3 * i + 2] = float(fn(double(d[3 * i + 2])));
  hsv.clamp();
  return hsv_to_rgb(hsv);
}

Clip pad_or_trim(std::vector<Frame> frames, std::size_t target, double fps, const std::string& id) {
  if (frames.empty()) throw InvalidArgument("cannot resize an empty frame sequence");
  if (target == 0) throw InvalidArgument("target frame count must be positive");
  frames.reserve(target);
  while (frames.size() < target) frames.push_back(frames.back());
  frames.resize(target);
  return Clip(id, fps, std::move(frames));
}

Plane guided_filter(const Plane& guide, const Plane& src, int radius, double eps) {
  const std::size_t n = guide.v.size();
  Plane ii(guide.width, guide.height), ip(guide.width, guide.height);
  for (std::size_t i = 0; i < n; ++i) {
    ii.v[i] = guide.v[i] * guide.v[i];
    ip.v[i] = guide.v[i] * src.v[i];
  }
  const Plane mi = box_mean(guide, radius), mp = box_mean(src, radius);
  const Plane mii = box_mean(ii, radius), mip = box_mean(ip, radius);
  Plane a(guide.width, guide.height), b(guide.width, guide.height);
  for (std::size_t i = 0; i < n; ++i) {
    const double var = mii.v[i] - double(mi.v[i]) * mi.v[i];
    const double cov = mip.v[i] - double(mi.v[i]) * mp.v[i];
    a.v[i] = float(cov / (var + eps));
    b.v[i] = float(mp.v[i] - a.v[i] * mi.v[i]);
  }
  const Plane ma = box_mean(a, radius), mb = box_mean(b, radius);
  Plane q(guide.width, guide.height);
  for (std::size_t i = 0; i < n; ++i) q.v[i] = ma.v[i] * guide.v[i] + mb.v[i];
  return q;
}

}  // namespace

Frame bilateral(const Frame& f, int radius, double sigma_space, double sigma_range) {
  if (radius < 0 || !(sigma_space > 0) || !(sigma_range > 0)) throw InvalidArgument("bad bilateral parameters");
  const int side = 2 * radius + 1;
  std::vector<double> spatial(std::size_t(side) * side);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      spatial[std::size_t(dy + radius) * side + dx + radius] =
          std::exp(-0.5 * (dx * dx + dy * dy) / (sigma_space * sigma_space));
  // Range distance is the mean squared channel difference, so sigma_range
  // reads on the same scale as a per-channel intensity step.
  const double inv_range = 1.0 / (2.0 * sigma_range * sigma_range);
  std::vector<float> out(f.data().size());
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) {
      const float r0 = f(x, y, 0), g0 = f(x, y, 1), b0 = f(x, y, 2);
      double acc[3] = {0, 0, 0}, wsum = 0;
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
          const int xx = std::clamp(x + dx, 0, f.width() - 1), yy = std::clamp(y + dy, 0, f.height() - 1);
          const double dr = f(xx, yy, 0) - r0, dg = f(xx, yy, 1) - g0, db = f(xx, yy, 2) - b0;
          const double w = spatial[std::size_t(dy + radius) * side + dx + radius] *
                           std::exp(-(dr * dr + dg * dg + db * db) / 3.0 * inv_range);
          acc[0] += w * f(xx, yy, 0);
          acc[1] += w * f(xx, yy, 1);
          acc[2] += w * f(xx, yy, 2);
          wsum += w;
        }
      const std::size_t i = (std::size_t(y) * f.width() + x) * 3;
      for (int c = 0; c < 3; ++c) out[i + c] = float(acc[c] / wsum);
    }
  Frame r(f.width(), f.height(), std::move(out));
  r.clamp();
  return r;
}

Clip denoise_gaussian(const Clip& clip, double sigma) {
  return per_frame(clip, [&](const Frame& f) { return gaussian_blur(f, sigma); });
}

Clip denoise_median(const Clip& clip) {
  return per_frame(clip, [](const Frame& f) { return map_channels(f, [](const Plane& p) { return median3(p); }); });
}

Clip denoise_bilateral(const Clip& clip, int radius, double sigma_space, double range_scale, double min_range,
                       double max_range) {
  return per_frame(clip, [&](const Frame& f) {
    const double sr = std::clamp(range_scale * noise_score(f), min_range, max_range);
    return bilateral(f, radius, sigma_space, sr);
  });
}

Clip unsharp_mask(const Clip& clip, double amount, double sigma) {
  return per_frame(clip, [&](const Frame& f) { return unsharp_frame(f, amount, sigma); });
}

Clip richardson_lucy(const Clip& clip, int iterations, double psf_sigma) {
  if (iterations < 1) throw InvalidArgument("richardson-lucy needs at least one iteration");
  const auto taps = gaussian_taps(psf_sigma);
  constexpr float kFloor = 1e-4f;
  return per_frame(clip, [&](const Frame& f) {
    return map_channels(f, [&](const Plane& observed) {
      Plane u = observed;
      for (auto& v : u.v) v = std::max(v, kFloor);
      Plane ratio(u.width, u.height);
      for (int it = 0; it < iterations; ++it) {
        const Plane est = convolve_separable(u, taps, taps);
        for (std::size_t i = 0; i < u.v.size(); ++i) ratio.v[i] = observed.v[i] / std::max(est.v[i], kFloor);
        // The Gaussian PSF is symmetric, so correlation equals convolution.
        const Plane corr = convolve_separable(ratio, taps, taps);
        for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] *= corr.v[i];
      }
      return u;
    });
  });
}

Clip deblock_smooth(const Clip& clip, double max_step) {
  static constexpr double kWeights[3] = {3.0 / 8, 2.0 / 8, 1.0 / 8};
  return per_frame(clip, [&](const Frame& f) {
    return map_channels(f, [&](const Plane& src) {
      Plane p = src;
      // Vertical boundaries from the source, horizontal ones on the result.
      for (int bx = 8; bx < p.width; bx += 8)
        for (int y = 0; y < p.height; ++y) {
          const double step = src(bx, y) - src(bx - 1, y);
          if (std::abs(step) >= max_step) continue;
          for (int j = 0; j < 3; ++j) {
            if (bx - 1 - j >= 0) p(bx - 1 - j, y) += float(step * kWeights[j]);
            if (bx + j < p.width) p(bx + j, y) -= float(step * kWeights[j]);
          }
        }
      const Plane mid = p;
      for (int by = 8; by < p.height; by += 8)
        for (int x = 0; x < p.width; ++x) {
          const double step = mid(x, by) - mid(x, by - 1);
          if (std::abs(step) >= max_step) continue;
          for (int j = 0; j < 3; ++j) {
            if (by - 1 - j >= 0) p(x, by - 1 - j) += float(step * kWeights[j]);
            if (by + j < p.height) p(x, by + j) -= float(step * kWeights[j]);
          }
        }
      return p;
    });
  });
}

Clip bilateral_deblock(const Clip& clip, int radius, double sigma_space, double sigma_range) {
  return per_frame(clip, [&](const Frame& f) { return bilateral(f, radius, sigma_space, sigma_range); });
}

namespace {

struct Dct8 {
  double c[8][8];
  Dct8() {
    for (int k = 0; k < 8; ++k)
      for (int n = 0; n < 8; ++n)
        c[k][n] = (k == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8)) * std::cos((2 * n + 1) * k * std::numbers::pi / 16);
  }
};

const Dct8& dct8() {
  static const Dct8 d;
  return d;
}

using Block = std::array<double, 64>;  // [row * 8 + col]; coefficients [vertical * 8 + horizontal]

Block forward_dct(const Block& in) {
  const auto& d = dct8();
  Block tmp{}, out{};
  for (int y = 0; y < 8; ++y)
    for (int k = 0; k < 8; ++k) {
      double a = 0;
      for (int n = 0; n < 8; ++n) a += d.c[k][n] * in[y * 8 + n];
      tmp[y * 8 + k] = a;
    }
  for (int k = 0; k < 8; ++k)
    for (int x = 0; x < 8; ++x) {
      double a = 0;
      for (int n = 0; n < 8; ++n) a += d.c[k][n] * tmp[n * 8 + x];
      out[k * 8 + x] = a;
    }
  return out;
}

Block inverse_dct(const Block& in) {
  const auto& d = dct8();
  Block tmp{}, out{};
  for (int n = 0; n < 8; ++n)
    for (int x = 0; x < 8; ++x) {
      double a = 0;
      for (int k = 0; k < 8; ++k) a += d.c[k][n] * in[k * 8 + x];
      tmp[n * 8 + x] = a;
    }
  for (int y = 0; y < 8; ++y)
    for (int n = 0; n < 8; ++n) {
      double a = 0;
      for (int k = 0; k < 8; ++k) a += d.c[k][n] * tmp[y * 8 + k];
      out[y * 8 + n] = a;
    }
  return out;
}

// Block at (bx, by) in codec units (x255 - 128), edge-replicated.
Block load_block(const Plane& p, int bx, int by) {
  Block b{};
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) b[y * 8 + x] = p.clamped(bx + x, by + y) * 255.0 - 128.0;
  return b;
}

void store_block(Plane& p, int bx, int by, const Block& b) {
  for (int y = 0; y < 8 && by + y < p.height; ++y)
    for (int x = 0; x < 8 && bx + x < p.width; ++x) p(bx + x, by + y) = float((b[y * 8 + x] + 128.0) / 255.0);
}

std::array<Plane, 3> to_ycbcr(const Frame& f) {
  std::array<Plane, 3> out{Plane(f.width(), f.height()), Plane(f.width(), f.height()), Plane(f.width(), f.height())};
  const auto d = f.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const double r = d[3 * i], g = d[3 * i + 1], b = d[3 * i + 2];
    out[0].v[i] = float(0.299 * r + 0.587 * g + 0.114 * b);
    out[1].v[i] = float(-0.168736 * r - 0.331264 * g + 0.5 * b + 0.5);
    out[2].v[i] = float(0.5 * r - 0.418688 * g - 0.081312 * b + 0.5);
  }
  return out;
}

Frame from_ycbcr(const std::array<Plane, 3>& p) {
  std::vector<float> out(p[0].v.size() * 3);
  for (std::size_t i = 0; i < p[0].v.size(); ++i) {
    const double y = p[0].v[i], u = p[1].v[i] - 0.5, v = p[2].v[i] - 0.5;
    out[3 * i] = float(y + 1.402 * v);
    out[3 * i + 1] = float(y - 0.344136 * u - 0.714136 * v);
    out[3 * i + 2] = float(y + 1.772 * u);
  }
  Frame f(p[0].width, p[0].height, std::move(out));
  f.clamp();
  return f;
}

double quant_step(int table_value, double scale) { return std::max(1.0, table_value * scale); }

}  // namespace

std::optional<double> estimate_jpeg_scale(const Clip& clip) {
  if (clip.empty()) throw InvalidArgument("estimate_jpeg_scale: empty clip");
  const auto& table = jpeg_luma_table();
  // (table position, coefficient) pairs clearly away from zero.
  std::vector<std::pair<int, double>> coefs;
  for (std::size_t fi : sample_indices(clip.size(), 4)) {
    const Plane y = to_ycbcr(clip[fi])[0];
    for (int by = 0; by + 8 <= y.height; by += 8)
      for (int bx = 0; bx + 8 <= y.width; bx += 8) {
        const Block c = forward_dct(load_block(y, bx, by));
        for (int i = 0; i < 64; ++i)
          if (std::abs(c[i]) > 2.0) coefs.emplace_back(i, c[i]);
      }
  }
  constexpr std::size_t kMaxSamples = 40000;
  if (coefs.size() > kMaxSamples) {
    std::vector<std::pair<int, double>> thin;
    const double stride = double(coefs.size()) / kMaxSamples;
    for (std::size_t i = 0; i < kMaxSamples; ++i) thin.push_back(coefs[std::size_t(i * stride)]);
    coefs.swap(thin);
  }
  constexpr double kMinFit = 0.7;
  constexpr std::size_t kMinCount = 64;
  std::vector<std::pair<double, double>> fits;  // (scale, fit) for fitting scales
  for (double s = 0.2; s <= 24.0; s *= 1.01) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [i, c] : coefs) {
      const double q = quant_step(table[i], s);
      if (q < 3.0 || std::abs(c) < 0.5 * q) continue;
      sum += std::cos(2.0 * std::numbers::pi * c / q);
      ++n;
    }
    if (n >= kMinCount && sum / double(n) >= kMinFit) fits.emplace_back(s, sum / double(n));
  }
  if (fits.empty()) return std::nullopt;
  // Sub-multiples of the true scale fit too: take the best fit just below
  // the largest fitting scale.
  const double largest = fits.back().first;
  std::pair<double, double> best = fits.back();
  for (const auto& f : fits)
    if (f.first >= largest / 1.1 && f.second > best.second) best = f;
  return best.first;
}

Clip dequantize_pocs(const Clip& clip, int iterations, double smooth_sigma) {
  if (iterations < 1 || !(smooth_sigma > 0)) throw InvalidArgument("bad quantization-constraint parameters");
  const auto scale = estimate_jpeg_scale(clip);
  if (!scale) return clip;
  const std::array<const std::array<int, 64>*, 3> tables = {&jpeg_luma_table(), &jpeg_chroma_table(),
                                                            &jpeg_chroma_table()};
  return per_frame(clip, [&](const Frame& f) {
    auto planes = to_ycbcr(f);
    for (int c = 0; c < 3; ++c) {
      Plane& p = planes[c];
      Block q{};
      for (int i = 0; i < 64; ++i) q[i] = quant_step((*tables[c])[i], *scale);
      // Observed coefficients snapped to their lattice points.
      std::vector<Block> observed;
      for (int by = 0; by < p.height; by += 8)
        for (int bx = 0; bx < p.width; bx += 8) {
          Block o = forward_dct(load_block(p, bx, by));
          for (int i = 0; i < 64; ++i) o[i] = std::round(o[i] / q[i]) * q[i];
          observed.push_back(o);
        }
      for (int it = 0; it < iterations; ++it) {
        p = gaussian_blur(p, smooth_sigma);
        std::size_t b = 0;
        for (int by = 0; by < p.height; by += 8)
          for (int bx = 0; bx < p.width; bx += 8, ++b) {
            Block coef = forward_dct(load_block(p, bx, by));
            for (int i = 0; i < 64; ++i)
              coef[i] = std::clamp(coef[i], observed[b][i] - 0.5 * q[i], observed[b][i] + 0.5 * q[i]);
            store_block(p, bx, by, inverse_dct(coef));
          }
      }
    }
    return from_ycbcr(planes);
  });
}

Clip gamma_lift(const Clip& clip, double target_mean) {
  if (!(target_mean > 0 && target_mean < 1)) throw InvalidArgument("gamma-lift target must lie in (0,1)");
  const double m = mean_value(clip);
  if (m <= 1e-6 || m >= target_mean) return clip;
  const double gamma = std::clamp(std::log(target_mean) / std::log(m), 0.15, 1.0);
  return per_frame(clip, [&](const Frame& f) { return map_value(f, [&](double v) { return std::pow(v, gamma); }); });
}

Clip v_gain_denoise(const Clip& clip, double target_mean, double max_gain, double denoise_sigma) {
  if (!(target_mean > 0 && target_mean <= 1) || !(max_gain >= 1))
    throw InvalidArgument("bad v-channel gain parameters");
  const double m = mean_value(clip);
  const double gain = m > 1e-6 ? std::clamp(target_mean / m, 1.0, max_gain) : max_gain;
  return per_frame(clip, [&](const Frame& f) {
    Frame hsv = rgb_to_hsv(f);
    Plane v = hsv.channel(2);
    for (auto& x : v.v) x = float(x * gain);
    if (denoise_sigma > 0) v = gaussian_blur(v, denoise_sigma);
    // set_channel clamps V back into range.
    hsv.set_channel(2, v);
    return hsv_to_rgb(hsv);
  });
}

Clip temporal_median3(const Clip& clip) {
  const std::size_t n = clip.size();
  if (n < 3) return clip;
  std::vector<Frame> out(n);
  parallel_for(n, [&](std::size_t i) {
    const std::size_t s = std::min(i > 0 ? i - 1 : 0, n - 3);
    const auto a = clip[s].data(), b = clip[s + 1].data(), c = clip[s + 2].data();
    std::vector<float> d(a.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::max(std::min(a[k], b[k]), std::min(std::max(a[k], b[k]), c[k]));
    out[i] = Frame(clip[i].width(), clip[i].height(), std::move(d));
  });
  return Clip(clip.id(), clip.fps(), std::move(out));
}

Clip directional_notch(const Clip& clip, double angle_deg, double min_excess) {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  // Perpendicular to the streak direction (cos t, -sin t).
  const double qx = std::sin(theta), qy = std::cos(theta);
  static constexpr double kOffsets[4] = {-3.0, -2.0, 2.0, 3.0};
  return per_frame(clip, [&](const Frame& f) {
    const Plane y = f.luma();
    Plane ch[3] = {f.channel(0), f.channel(1), f.channel(2)};
    std::vector<float> out(f.data().begin(), f.data().end());
    auto across_median = [&](const Plane& p, int x, int yy) {
      float s[4];
      for (int k = 0; k < 4; ++k) s[k] = bilinear(p, x + kOffsets[k] * qx, yy + kOffsets[k] * qy);
      std::sort(s, s + 4);
      return 0.5f * (s[1] + s[2]);
    };
    for (int yy = 0; yy < f.height(); ++yy)
      for (int x = 0; x < f.width(); ++x) {
        if (y(x, yy) - across_median(y, x, yy) <= min_excess) continue;
        const std::size_t i = (std::size_t(yy) * f.width() + x) * 3;
        for (int c = 0; c < 3; ++c) out[i + c] = across_median(ch[c], x, yy);
      }
    return Frame(f.width(), f.height(), std::move(out));
  });
}

Clip dehaze_dark_channel(const Clip& clip, double omega, double t_min, int patch_radius, int guide_radius,
                         double guide_eps) {
  if (!(omega > 0 && omega <= 1) || !(t_min > 0 && t_min < 1)) throw InvalidArgument("bad dehaze parameters");
  // Airlight: mean colour of the brightest 0.1% dark-channel pixels.
  double airlight[3] = {0, 0, 0};
  std::size_t picked = 0;
  for (std::size_t fi : sample_indices(clip.size(), kDetectorFrames)) {
    const Frame& f = clip[fi];
    const Plane dc = dark_channel(f, patch_radius);
    std::vector<std::size_t> order(dc.v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t top = std::max<std::size_t>(1, order.size() / 1000);
    std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](std::size_t a, std::size_t b) {
      return dc.v[a] != dc.v[b] ? dc.v[a] > dc.v[b] : a < b;
    });
    const auto d = f.data();
    for (std::size_t k = 0; k < top; ++k)
      for (int c = 0; c < 3; ++c) airlight[c] += d[3 * order[k] + c];
    picked += top;
  }
  for (double& a : airlight) a = std::max(0.05, a / double(picked));

  return per_frame(clip, [&](const Frame& f) {
    std::vector<float> norm(f.data().size());
    const auto d = f.data();
    for (std::size_t i = 0; i < f.pixel_count(); ++i)
      for (int c = 0; c < 3; ++c) norm[3 * i + c] = float(std::min(1.0, d[3 * i + c] / airlight[c]));
    const Plane dc = dark_channel(Frame(f.width(), f.height(), std::move(norm)), patch_radius);
    Plane t(f.width(), f.height());
    for (std::size_t i = 0; i < t.v.size(); ++i) t.v[i] = float(1.0 - omega * dc.v[i]);
    t = guided_filter(f.luma(), t, guide_radius, guide_eps);
    std::vector<float> out(d.size());
    for (std::size_t i = 0; i < f.pixel_count(); ++i) {
      const double ti = std::max(t_min, double(t.v[i]));
      for (int c = 0; c < 3; ++c) out[3 * i + c] = float((d[3 * i + c] - airlight[c]) / ti + airlight[c]);
    }
    Frame r(f.width(), f.height(), std::move(out));
    r.clamp();
    return r;
  });
}

Clip contrast_stretch(const Clip& clip, double low_pct, double high_pct) {
  if (!(low_pct >= 0 && low_pct < high_pct && high_pct <= 100)) throw InvalidArgument("bad stretch percentiles");
  double lo[3], hi[3];
  for (int c = 0; c < 3; ++c) {
    std::vector<float> v;
    for (std::size_t fi : sample_indices(clip.size(), kDetectorFrames)) {
      const auto d = clip[fi].data();
      for (std::size_t i = 0; i < clip[fi].pixel_count(); ++i) v.push_back(d[3 * i + c]);
    }
    auto at = [&](double pct) {
      const auto k = v.begin() + static_cast<std::ptrdiff_t>(std::llround(pct / 100.0 * double(v.size() - 1)));
      std::nth_element(v.begin(), k, v.end());
      return double(*k);
    };
    lo[c] = at(low_pct);
    hi[c] = at(high_pct);
  }
  return per_frame(clip, [&](const Frame& f) {
    std::vector<float> out(f.data().size());
    const auto d = f.data();
    for (std::size_t i = 0; i < f.pixel_count(); ++i)
      for (int c = 0; c < 3; ++c) {
        const double span = hi[c] - lo[c];
        out[3 * i + c] = span > 1e-6 ? float((d[3 * i + c] - lo[c]) / span) : d[3 * i + c];
      }
    Frame r(f.width(), f.height(), std::move(out));
    r.clamp();
    return r;
  });
}

Clip upsample_bicubic(const Clip& clip, int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("target resolution must be positive");
  return per_frame(clip, [&](const Frame& f) { return resample_bicubic(f, width, height); });
}

Clip upsample_sharpen(const Clip& clip, int width, int height, double amount, double sigma) {
  if (width < 1 || height < 1) throw InvalidArgument("target resolution must be positive");
  return per_frame(clip,
                   [&](const Frame& f) { return unsharp_frame(resample_bicubic(f, width, height), amount, sigma); });
}

Clip interpolate_blend(const Clip& clip, int factor, std::optional<std::size_t> frames) {
  if (factor < 1) throw InvalidArgument("interpolation factor must be >= 1");
  if (clip.empty()) throw InvalidArgument("cannot interpolate an empty clip");
  const std::size_t n = clip.size();
  std::vector<Frame> out((n - 1) * factor + 1);
  parallel_for(out.size(), [&](std::size_t o) {
    const std::size_t i = o / factor, j = o % factor;
    if (j == 0) {
      out[o] = clip[i];
      return;
    }
    const double w = double(j) / factor;
    const auto a = clip[i].data(), b = clip[i + 1].data();
    std::vector<float> d(a.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = float((1 - w) * a[k] + w * b[k]);
    out[o] = Frame(clip[i].width(), clip[i].height(), std::move(d));
  });
  return pad_or_trim(std::move(out), frames.value_or(n * factor), clip.fps() * factor, clip.id());
}

Clip repeat_frames(const Clip& clip, int factor, std::optional<std::size_t> frames) {
  if (factor < 1) throw InvalidArgument("repeat factor must be >= 1");
  if (clip.empty()) throw InvalidArgument("cannot repeat frames of an empty clip");
  std::vector<Frame> out;
  out.reserve(clip.size() * factor);
  for (const auto& f : clip.frames())
    for (int j = 0; j < factor; ++j) out.push_back(f);
  return pad_or_trim(std::move(out), frames.value_or(clip.size() * factor), clip.fps() * factor, clip.id());
}

}  // namespace vrestore
