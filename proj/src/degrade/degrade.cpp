#include "vrestore/degrade/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "vrestore/error.hpp"
#include "vrestore/media/color.hpp"
#include "vrestore/media/filter.hpp"
#include "vrestore/media/resample.hpp"
#include "vrestore/parallel.hpp"

namespace vrestore {

using nlohmann::json;

namespace {

template <typename T>
T pick(Severity s, T low, T medium, T high) {
  switch (s) {
    case Severity::Low: return low;
    case Severity::Medium: return medium;
    case Severity::High: return high;
    default: throw InvalidArgument("severity None has no parameters");
  }
}

// P(Z > z) = p for standard normal Z.
double normal_upper_quantile(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(mid / std::numbers::sqrt2) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Frame> per_frame(const Clip& clip, auto&& fn) {
  std::vector<Frame> out(clip.size());
  parallel_for(clip.size(), [&](std::size_t i) { out[i] = fn(clip[i], i); });
  return out;
}

Frame add_noise(const Frame& f, const NoiseParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<float> data(f.data().begin(), f.data().end());
  if (p.model == NoiseModel::Gaussian) {
    std::normal_distribution<double> n(0.0, p.sigma);
    for (float& v : data) v = static_cast<float>(v + n(rng));
  } else {
    for (float& v : data) {
      std::poisson_distribution<long> pd(std::max(0.0, double(v) * p.photon_scale));
      v = static_cast<float>(pd(rng) / p.photon_scale);
    }
  }
  return Frame(f.width(), f.height(), std::move(data));
}

// 8x8 orthonormal DCT-II basis.
struct Dct8 {
  double c[8][8];
  Dct8() {
    for (int k = 0; k < 8; ++k)
      for (int n = 0; n < 8; ++n)
        c[k][n] = (k == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8)) * std::cos((2 * n + 1) * k * std::numbers::pi / 16);
  }
};

void quantize_plane(Plane& p, const std::array<int, 64>& table, double scale) {
  static const Dct8 dct;
  double block[8][8], tmp[8][8], coef[8][8];
  for (int by = 0; by < p.height; by += 8) {
    for (int bx = 0; bx < p.width; bx += 8) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) block[y][x] = p.clamped(bx + x, by + y) * 255.0 - 128.0;
      for (int y = 0; y < 8; ++y)
        for (int k = 0; k < 8; ++k) {
          double a = 0;
          for (int n = 0; n < 8; ++n) a += dct.c[k][n] * block[y][n];
          tmp[y][k] = a;
        }
      for (int k = 0; k < 8; ++k)
        for (int x = 0; x < 8; ++x) {
          double a = 0;
          for (int n = 0; n < 8; ++n) a += dct.c[k][n] * tmp[n][x];
          coef[k][x] = a;
        }
      for (int k = 0; k < 8; ++k)
        for (int x = 0; x < 8; ++x) {
          const double q = std::max(1.0, table[k * 8 + x] * scale);
          coef[k][x] = std::round(coef[k][x] / q) * q;
        }
      for (int n = 0; n < 8; ++n)
        for (int x = 0; x < 8; ++x) {
          double a = 0;
          for (int k = 0; k < 8; ++k) a += dct.c[k][n] * coef[k][x];
          tmp[n][x] = a;
        }
      for (int y = 0; y < 8; ++y)
        for (int n = 0; n < 8; ++n) {
          double a = 0;
          for (int k = 0; k < 8; ++k) a += dct.c[k][n] * tmp[y][k];
          block[y][n] = a;
        }
      for (int y = 0; y < 8 && by + y < p.height; ++y)
        for (int x = 0; x < 8 && bx + x < p.width; ++x) p(bx + x, by + y) = float((block[y][x] + 128.0) / 255.0);
    }
  }
}

Frame compress(const Frame& f, const CompressionParams& p) {
  // Full-range BT.601 YCbCr, as in JFIF.
  Plane y(f.width(), f.height()), cb(f.width(), f.height()), cr(f.width(), f.height());
  const auto d = f.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const double r = d[3 * i], g = d[3 * i + 1], b = d[3 * i + 2];
    y.v[i] = float(0.299 * r + 0.587 * g + 0.114 * b);
    cb.v[i] = float(-0.168736 * r - 0.331264 * g + 0.5 * b + 0.5);
    cr.v[i] = float(0.5 * r - 0.418688 * g - 0.081312 * b + 0.5);
  }
  quantize_plane(y, jpeg_luma_table(), p.quant_scale);
  quantize_plane(cb, jpeg_chroma_table(), p.quant_scale);
  quantize_plane(cr, jpeg_chroma_table(), p.quant_scale);
  std::vector<float> out(f.data().size());
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    const double yy = y.v[i], u = cb.v[i] - 0.5, v = cr.v[i] - 0.5;
    out[3 * i] = float(yy + 1.402 * v);
    out[3 * i + 1] = float(yy - 0.344136 * u - 0.714136 * v);
    out[3 * i + 2] = float(yy + 1.772 * u);
  }
  return Frame(f.width(), f.height(), std::move(out));
}

Frame low_light(const Frame& f, const LowLightParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, p.noise_sigma);
  Frame hsv = rgb_to_hsv(f);
  auto d = hsv.mutable_data();
  for (std::size_t i = 0; i < hsv.pixel_count(); ++i) {
    const double noise = p.noise_sigma > 0 ? n(rng) : 0.0;
    d[3 * i + 2] = float(d[3 * i + 2] * p.gain + noise);
  }
  hsv.clamp();
  return hsv_to_rgb(hsv);
}

Frame rain(const Frame& f, const RainParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const double z = normal_upper_quantile(p.density);
  const double theta = p.angle_deg * std::numbers::pi / 180.0;
  const double dx = std::cos(theta), dy = -std::sin(theta);
  Plane layer(f.width(), f.height());
  // Splatting a unit impulse along the streak direction is the same as
  // convolving the thresholded field with a normalized line kernel scaled by
  // its length.
  const double half = (p.length - 1) / 2.0;
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      if (n(rng) <= z) continue;
      for (int s = 0; s < p.length; ++s) {
        const double px = x + (s - half) * dx, py = y + (s - half) * dy;
        const int ix = static_cast<int>(std::floor(px)), iy = static_cast<int>(std::floor(py));
        const double fx = px - ix, fy = py - iy;
        const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
        const int xs[4] = {ix, ix + 1, ix, ix + 1}, ys[4] = {iy, iy, iy + 1, iy + 1};
        for (int k = 0; k < 4; ++k) {
          if (xs[k] < 0 || ys[k] < 0 || xs[k] >= f.width() || ys[k] >= f.height()) continue;
          layer(xs[k], ys[k]) += float(w[k] * p.intensity);
        }
      }
    }
  }
  std::vector<float> out(f.data().begin(), f.data().end());
  for (std::size_t i = 0; i < f.pixel_count(); ++i)
    for (int c = 0; c < 3; ++c) out[3 * i + c] += layer.v[i];
  return Frame(f.width(), f.height(), std::move(out));
}

Frame haze(const Frame& f, const HazeParams& p) {
  std::vector<float> out(f.data().begin(), f.data().end());
  const int h = f.height();
  for (int y = 0; y < h; ++y) {
    // Depth ramp: top row farthest (1), bottom row nearest (0).
    const double depth = h > 1 ? 1.0 - double(y) / (h - 1) : 0.0;
    const double t = std::exp(-p.beta_dmax * depth);
    for (int x = 0; x < f.width(); ++x)
      for (int c = 0; c < 3; ++c) {
        float& v = out[(std::size_t(y) * f.width() + x) * 3 + c];
        v = float(v * t + p.airlight * (1.0 - t));
      }
  }
  return Frame(f.width(), f.height(), std::move(out));
}

}  // namespace

const std::array<int, 64>& jpeg_luma_table() {
  static const std::array<int, 64> t = {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
                                        14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
                                        18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
                                        49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
  return t;
}

const std::array<int, 64>& jpeg_chroma_table() {
  static const std::array<int, 64> t = {17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
                                        24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
                                        99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
                                        99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};
  return t;
}

DegradationParams default_params(DegradationKind kind, Severity s) {
  switch (kind) {
    case DegradationKind::Noise: {
      NoiseParams p;
      p.sigma = pick(s, 0.02, 0.05, 0.10);
      p.photon_scale = pick(s, 512.0, 128.0, 32.0);
      return p;
    }
    case DegradationKind::Blur: {
      BlurParams p;
      p.sigma = pick(s, 1.0, 2.0, 3.5);
      p.radius = pick(s, 2.0, 4.0, 7.0);
      return p;
    }
    case DegradationKind::Compression: return CompressionParams{pick(s, 2.0, 4.0, 8.0)};
    case DegradationKind::LowLight: return LowLightParams{pick(s, 0.6, 0.4, 0.25), 0.004};
    case DegradationKind::Rain: return RainParams{pick(s, 0.002, 0.006, 0.015), pick(s, 9, 15, 21), 75.0, 0.5};
    case DegradationKind::Haze: return HazeParams{pick(s, 0.8, 1.5, 2.5), 0.9};
    case DegradationKind::LowRes: return LowResParams{pick(s, 2, 3, 4)};
    case DegradationKind::LowFps: return LowFpsParams{pick(s, 2, 4, 8)};
  }
  throw InvalidArgument("unknown degradation kind");
}

DegradationSpec make_spec(DegradationKind kind, Severity severity, std::uint64_t seed) {
  return DegradationSpec{kind, severity, default_params(kind, severity), seed};
}

void validate(const DegradationSpec& spec) {
  if (spec.severity == Severity::None) throw InvalidArgument("degradation severity must not be None");
  if (spec.params.index() != index_of(spec.kind)) throw InvalidArgument("params do not match degradation kind");
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        auto require = [](bool ok, const char* what) {
          if (!ok) throw InvalidArgument(what);
        };
        if constexpr (std::is_same_v<P, NoiseParams>) {
          require(p.sigma > 0 && p.sigma <= 1, "noise sigma out of range");
          require(p.photon_scale > 0, "photon scale must be positive");
        } else if constexpr (std::is_same_v<P, BlurParams>) {
          require(p.sigma > 0 && p.radius > 0, "blur size must be positive");
        } else if constexpr (std::is_same_v<P, CompressionParams>) {
          require(p.quant_scale > 0, "quant scale must be positive");
        } else if constexpr (std::is_same_v<P, LowLightParams>) {
          require(p.gain > 0 && p.gain < 1 && p.noise_sigma >= 0, "low-light gain must be in (0,1)");
        } else if constexpr (std::is_same_v<P, RainParams>) {
          require(p.density > 0 && p.density < 1 && p.length >= 1 && p.intensity > 0, "rain params out of range");
        } else if constexpr (std::is_same_v<P, HazeParams>) {
          require(p.beta_dmax > 0 && p.airlight > 0 && p.airlight <= 1, "haze params out of range");
        } else if constexpr (std::is_same_v<P, LowResParams>) {
          require(p.factor >= 2, "low-res factor must be >= 2");
        } else if constexpr (std::is_same_v<P, LowFpsParams>) {
          require(p.step >= 2, "low-fps step must be >= 2");
        }
      },
      spec.params);
}

Clip apply_degradation(const Clip& clip, const DegradationSpec& spec) {
  validate(spec);
  if (clip.empty()) throw InvalidArgument("cannot degrade an empty clip");
  const std::uint64_t seed = spec.seed;
  switch (spec.kind) {
    case DegradationKind::Noise: {
      const auto& p = std::get<NoiseParams>(spec.params);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t i) { return add_noise(f, p, seed + i); }));
    }
    case DegradationKind::Blur: {
      const auto& p = std::get<BlurParams>(spec.params);
      if (p.model == BlurModel::Gaussian)
        return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t) { return gaussian_blur(f, p.sigma); }));
      const Kernel k = disc_kernel(p.radius);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t) { return convolve2d(f, k); }));
    }
    case DegradationKind::Compression: {
      const auto& p = std::get<CompressionParams>(spec.params);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t) { return compress(f, p); }));
    }
    case DegradationKind::LowLight: {
      const auto& p = std::get<LowLightParams>(spec.params);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t i) { return low_light(f, p, seed + i); }));
    }
    case DegradationKind::Rain: {
      const auto& p = std::get<RainParams>(spec.params);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t i) { return rain(f, p, seed + i); }));
    }
    case DegradationKind::Haze: {
      const auto& p = std::get<HazeParams>(spec.params);
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t) { return haze(f, p); }));
    }
    case DegradationKind::LowRes: {
      const int s = std::get<LowResParams>(spec.params).factor;
      const int w = clip.width() / s, h = clip.height() / s;
      if (w < 1 || h < 1) throw InvalidArgument("low-res factor collapses a frame dimension to zero");
      return Clip(clip.id(), clip.fps(), per_frame(clip, [&](const Frame& f, std::size_t) { return resample_bicubic(f, w, h); }));
    }
    case DegradationKind::LowFps: {
      const int k = std::get<LowFpsParams>(spec.params).step;
      if (std::size_t(k) >= clip.size()) throw InvalidArgument("low-fps step must be smaller than the frame count");
      std::vector<Frame> kept;
      for (std::size_t i = 0; i < clip.size(); i += k) kept.push_back(clip[i]);
      return Clip(clip.id(), clip.fps() / k, std::move(kept));
    }
  }
  throw InvalidArgument("unknown degradation kind");
}

int acquisition_group(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::LowLight:
    case DegradationKind::Rain:
    case DegradationKind::Haze: return 0;
    case DegradationKind::Blur: return 1;
    case DegradationKind::Noise: return 2;
    case DegradationKind::LowRes:
    case DegradationKind::LowFps: return 3;
    case DegradationKind::Compression: return 4;
  }
  return 5;
}

KindList canonical_mixed_order(KindList kinds) {
  if (kinds.empty() || kinds.size() > 3) throw InvalidArgument("mixed degradation needs 1 to 3 kinds");
  if (std::set<DegradationKind>(kinds.begin(), kinds.end()).size() != kinds.size())
    throw InvalidArgument("mixed degradation kinds must be distinct");
  std::sort(kinds.begin(), kinds.end(), [](DegradationKind a, DegradationKind b) {
    const int ga = acquisition_group(a), gb = acquisition_group(b);
    return ga != gb ? ga < gb : index_of(a) < index_of(b);
  });
  return kinds;
}

KindList GroundTruthLabel::kinds() const {
  KindList out;
  for (const auto& s : specs) out.push_back(s.kind);
  return out;
}

std::pair<Clip, GroundTruthLabel> compose_mixed(const Clip& clip, std::vector<DegradationSpec> specs,
                                                std::string degraded_id) {
  KindList kinds;
  for (const auto& s : specs) kinds.push_back(s.kind);
  const KindList order = canonical_mixed_order(kinds);
  std::stable_sort(specs.begin(), specs.end(), [&](const DegradationSpec& a, const DegradationSpec& b) {
    return std::find(order.begin(), order.end(), a.kind) < std::find(order.begin(), order.end(), b.kind);
  });
  Clip out = clip;
  for (const auto& s : specs) out = apply_degradation(out, s);
  GroundTruthLabel label{degraded_id, std::move(specs), clip.id()};
  return {out.with_id(std::move(degraded_id)), std::move(label)};
}

json to_json(const DegradationSpec& spec) {
  json params = std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NoiseParams>)
          return {{"model", p.model == NoiseModel::Gaussian ? "gaussian" : "poisson"},
                  {"sigma", p.sigma},
                  {"photon_scale", p.photon_scale}};
        else if constexpr (std::is_same_v<P, BlurParams>)
          return {{"model", p.model == BlurModel::Gaussian ? "gaussian" : "disc"}, {"sigma", p.sigma}, {"radius", p.radius}};
        else if constexpr (std::is_same_v<P, CompressionParams>)
          return {{"quant_scale", p.quant_scale}};
        else if constexpr (std::is_same_v<P, LowLightParams>)
          return {{"gain", p.gain}, {"noise_sigma", p.noise_sigma}};
        else if constexpr (std::is_same_v<P, RainParams>)
          return {{"density", p.density}, {"length", p.length}, {"angle_deg", p.angle_deg}, {"intensity", p.intensity}};
        else if constexpr (std::is_same_v<P, HazeParams>)
          return {{"beta_dmax", p.beta_dmax}, {"airlight", p.airlight}};
        else if constexpr (std::is_same_v<P, LowResParams>)
          return {{"factor", p.factor}};
        else
          return {{"step", p.step}};
      },
      spec.params);
  return {{"kind", std::string(to_string(spec.kind))},
          {"severity", std::string(to_string(spec.severity))},
          {"params", params},
          {"seed", spec.seed}};
}

DegradationSpec spec_from_json(const json& j) {
  try {
    DegradationSpec s;
    s.kind = parse_kind(j.at("kind").get<std::string>());
    s.severity = parse_severity(j.at("severity").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    s.params = default_params(s.kind, s.severity == Severity::None ? Severity::Medium : s.severity);
    const json p = j.value("params", json::object());
    std::visit(
        [&](auto& q) {
          using P = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<P, NoiseParams>) {
            q.model = p.value("model", std::string("gaussian")) == "poisson" ? NoiseModel::Poisson : NoiseModel::Gaussian;
            q.sigma = p.value("sigma", q.sigma);
            q.photon_scale = p.value("photon_scale", q.photon_scale);
          } else if constexpr (std::is_same_v<P, BlurParams>) {
            q.model = p.value("model", std::string("gaussian")) == "disc" ? BlurModel::Disc : BlurModel::Gaussian;
            q.sigma = p.value("sigma", q.sigma);
            q.radius = p.value("radius", q.radius);
          } else if constexpr (std::is_same_v<P, CompressionParams>) {
            q.quant_scale = p.value("quant_scale", q.quant_scale);
          } else if constexpr (std::is_same_v<P, LowLightParams>) {
            q.gain = p.value("gain", q.gain);
            q.noise_sigma = p.value("noise_sigma", q.noise_sigma);
          } else if constexpr (std::is_same_v<P, RainParams>) {
            q.density = p.value("density", q.density);
            q.length = p.value("length", q.length);
            q.angle_deg = p.value("angle_deg", q.angle_deg);
            q.intensity = p.value("intensity", q.intensity);
          } else if constexpr (std::is_same_v<P, HazeParams>) {
            q.beta_dmax = p.value("beta_dmax", q.beta_dmax);
            q.airlight = p.value("airlight", q.airlight);
          } else if constexpr (std::is_same_v<P, LowResParams>) {
            q.factor = p.value("factor", q.factor);
          } else {
            q.step = p.value("step", q.step);
          }
        },
        s.params);
    return s;
  } catch (const json::exception& e) {
    throw InvalidFormat(std::string("malformed degradation spec: ") + e.what());
  }
}

json to_json(const GroundTruthLabel& label) {
  json specs = json::array();
  for (const auto& s : label.specs) specs.push_back(to_json(s));
  return {{"clip", label.clip_id}, {"gt", label.gt_clip_id}, {"specs", specs}};
}

GroundTruthLabel label_from_json(const json& j) {
  try {
    GroundTruthLabel l;
    l.clip_id = j.at("clip").get<std::string>();
    l.gt_clip_id = j.at("gt").get<std::string>();
    for (const auto& s : j.at("specs")) l.specs.push_back(spec_from_json(s));
    return l;
  } catch (const json::exception& e) {
    throw InvalidFormat(std::string("malformed label: ") + e.what());
  }
}

}  // namespace vrestore
