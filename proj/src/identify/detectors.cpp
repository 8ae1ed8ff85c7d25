#include "vrestore/identify/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vrestore/error.hpp"
#include "vrestore/media/color.hpp"
#include "vrestore/media/filter.hpp"
#include "vrestore/media/resample.hpp"

namespace vrestore {

namespace {

double median_of(std::vector<float>& v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Residual of the separable [1 -2 1] x [1 -2 1] operator: zero on planar
// and one-dimensional structure, so straight edges barely register.
double laplacian_mad_sigma(const Plane& p) {
  if (p.width < 3 || p.height < 3) return 0.0;
  std::vector<float> r;
  r.reserve(std::size_t(p.width - 2) * (p.height - 2));
  for (int y = 1; y < p.height - 1; ++y)
    for (int x = 1; x < p.width - 1; ++x) {
      const double v = p(x - 1, y - 1) - 2 * p(x, y - 1) + p(x + 1, y - 1) - 2 * p(x - 1, y) + 4 * p(x, y) -
                       2 * p(x + 1, y) + p(x - 1, y + 1) - 2 * p(x, y + 1) + p(x + 1, y + 1);
      r.push_back(static_cast<float>(std::abs(v)));
    }
  // The operator has unit-noise gain 6; MAD / 0.6745 estimates sigma.
  return median_of(r) / 0.6745 / 6.0;
}

float bilinear(const Plane& p, double x, double y) {
  const int ix = static_cast<int>(std::floor(x)), iy = static_cast<int>(std::floor(y));
  const double fx = x - ix, fy = y - iy;
  return static_cast<float>((1 - fx) * (1 - fy) * p.clamped(ix, iy) + fx * (1 - fy) * p.clamped(ix + 1, iy) +
                            (1 - fx) * fy * p.clamped(ix, iy + 1) + fx * fy * p.clamped(ix + 1, iy + 1));
}

}  // namespace

double noise_score(const Frame& f) {
  Plane rg(f.width(), f.height()), bg(f.width(), f.height());
  const auto d = f.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    rg.v[i] = d[3 * i] - d[3 * i + 1];
    bg.v[i] = d[3 * i + 2] - d[3 * i + 1];
  }
  // A difference of two independent channels has sigma * sqrt(2).
  return 0.5 * (laplacian_mad_sigma(rg) + laplacian_mad_sigma(bg)) / std::numbers::sqrt2;
}

namespace {

// Collects edge widths along one axis. line(i) returns the i-th sample of a
// scan line of length n. The width of an edge is its contrast divided by its
// peak gradient, which is ~1 px for a step and ~2.5 sigma for a Gaussian ramp.
template <typename Line>
void scan_edge_widths(Line&& line, int n, double threshold,
                      std::vector<std::pair<double, double>>& edges) {
  if (n < 3) return;
  constexpr int kReach = 12;
  std::vector<double> g(n - 1);
  for (int i = 0; i + 1 < n; ++i) g[i] = line(i + 1) - line(i);
  for (int i = 0; i + 1 < n; ++i) {
    const double peak = std::abs(g[i]);
    if (peak < threshold) continue;
    if (i > 0 && std::abs(g[i - 1]) > peak) continue;
    if (i + 2 < n && std::abs(g[i + 1]) >= peak) continue;
    const double sign = g[i] > 0 ? 1.0 : -1.0;
    const double floor_level = 0.1 * peak;
    double contrast = peak;
    int lo = i, hi = i;
    while (lo > 0 && i - lo < kReach && sign * g[lo - 1] > floor_level) contrast += sign * g[--lo];
    while (hi + 2 < n && hi - i < kReach && sign * g[hi + 1] > floor_level) contrast += sign * g[++hi];
    // Edges cut off by the frame border have unknown width.
    if (lo == 0 || hi + 2 >= n) continue;
    edges.emplace_back(peak, contrast / peak);
  }
}

}  // namespace

double blur_score(const Plane& y) {
  if (y.width < 3 || y.height < 3) return 0.0;
  // Strong-edge threshold relative to the frame's own gradient range, so the
  // measure ignores global contrast scaling (haze, low light).
  std::vector<float> mags;
  mags.reserve(y.v.size());
  for (int r = 0; r < y.height; ++r)
    for (int c = 1; c < y.width; ++c) mags.push_back(std::abs(y(c, r) - y(c - 1, r)));
  const auto q = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() * 0.995);
  std::nth_element(mags.begin(), q, mags.end());
  const double threshold = std::max(0.01, 0.3 * double(*q));
  std::vector<std::pair<double, double>> edges;  // (peak gradient, width)
  for (int r = 0; r < y.height; ++r)
    scan_edge_widths([&](int i) { return double(y(i, r)); }, y.width, threshold, edges);
  for (int c = 0; c < y.width; ++c)
    scan_edge_widths([&](int i) { return double(y(c, i)); }, y.height, threshold, edges);
  if (edges.empty()) return 0.0;
  // Only the strongest edges: object boundaries rather than texture ripples.
  std::vector<double> peaks;
  for (const auto& e : edges) peaks.push_back(e.first);
  const auto p98 = peaks.begin() + static_cast<std::ptrdiff_t>((peaks.size() - 1) * 0.98);
  std::nth_element(peaks.begin(), p98, peaks.end());
  const double strong = 0.5 * *p98;
  std::vector<double> widths;
  for (const auto& e : edges)
    if (e.first >= strong) widths.push_back(e.second);
  const auto mid = widths.begin() + static_cast<std::ptrdiff_t>(widths.size() / 2);
  std::nth_element(widths.begin(), mid, widths.end());
  return *mid;
}

double blockiness_score(const Plane& y) {
  double edge_h = 0, inner_h = 0, edge_v = 0, inner_v = 0;
  std::size_t n_edge_h = 0, n_inner_h = 0, n_edge_v = 0, n_inner_v = 0;
  for (int r = 0; r < y.height; ++r)
    for (int c = 1; c < y.width; ++c) {
      const double d = std::abs(y(c, r) - y(c - 1, r));
      if (c % 8 == 0) edge_h += d, ++n_edge_h;
      else inner_h += d, ++n_inner_h;
    }
  for (int r = 1; r < y.height; ++r)
    for (int c = 0; c < y.width; ++c) {
      const double d = std::abs(y(c, r) - y(c, r - 1));
      if (r % 8 == 0) edge_v += d, ++n_edge_v;
      else inner_v += d, ++n_inner_v;
    }
  auto ratio = [](double e, std::size_t ne, double i, std::size_t ni) {
    if (ne == 0 || ni == 0) return 0.0;
    const double mi = i / ni;
    return mi > 1e-9 ? (e / ne) / mi - 1.0 : 0.0;
  };
  const double rh = ratio(edge_h, n_edge_h, inner_h, n_inner_h);
  const double rv = ratio(edge_v, n_edge_v, inner_v, n_inner_v);
  return 0.5 * (rh + rv);
}

double darkness_score(const Frame& f) {
  double sum = 0;
  const auto d = f.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) sum += std::max({d[3 * i], d[3 * i + 1], d[3 * i + 2]});
  return 1.0 - sum / double(f.pixel_count());
}

Plane dark_channel(const Frame& f, int radius) {
  Plane mn(f.width(), f.height());
  const auto d = f.data();
  for (std::size_t i = 0; i < f.pixel_count(); ++i) mn.v[i] = std::min({d[3 * i], d[3 * i + 1], d[3 * i + 2]});
  return min_filter(mn, radius);
}

double dark_channel_score(const Frame& f) {
  const Plane dc = dark_channel(f);
  double sum = 0;
  for (float v : dc.v) sum += v;
  return sum / double(dc.v.size());
}

double rain_score(const Frame& f, const Frame* prev, const Frame* next, double angle_deg) {
  const Plane y = f.luma();
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double ax = std::cos(theta), ay = -std::sin(theta);  // along the stroke
  const double nx = -ay, ny = ax;                            // across it
  Plane resid(y.width, y.height);
  for (int r = 0; r < y.height; ++r)
    for (int c = 0; c < y.width; ++c) {
      float s[5];
      for (int k = -2; k <= 2; ++k) s[k + 2] = bilinear(y, c + k * nx, r + k * ny);
      std::nth_element(s, s + 2, s + 5);
      resid(c, r) = std::max(0.f, y(c, r) - s[2]);
    }
  if (prev && next) {
    const Plane yp = prev->luma(), yn = next->luma();
    for (std::size_t i = 0; i < resid.v.size(); ++i) {
      float t[3] = {yp.v[i], y.v[i], yn.v[i]};
      std::sort(t, t + 3);
      resid.v[i] = std::min(resid.v[i], std::max(0.f, y.v[i] - t[1]));
    }
  }
  constexpr double kStrokeContrast = 0.12;
  std::size_t hits = 0;
  for (int r = 0; r < y.height; ++r)
    for (int c = 0; c < y.width; ++c) {
      if (resid(c, r) <= 0.f) continue;
      double along = 0, across = 0;
      for (int k = -4; k <= 4; ++k) {
        along += bilinear(resid, c + k * ax, r + k * ay);
        across += bilinear(resid, c + k * nx, r + k * ny);
      }
      if ((along - across) / 9.0 > kStrokeContrast) ++hits;
    }
  return 100.0 * double(hits) / double(y.v.size());
}

double lowres_score(const Clip& clip, const NominalFormat& nominal, bool& low_confidence) {
  if (nominal.has_resolution()) {
    low_confidence = false;
    const double sx = double(*nominal.width) / clip.width();
    const double sy = double(*nominal.height) / clip.height();
    return std::max(1.0, std::min(sx, sy));
  }
  // Spectral roll-off proxy: content that survives a 2x down/up round trip
  // almost unchanged carries little energy near Nyquist.
  low_confidence = true;
  const Plane y = clip[0].luma();
  if (y.width < 8 || y.height < 8) return 1.0;
  const Plane round_trip =
      resample_bicubic(resample_bicubic(y, y.width / 2, y.height / 2), y.width, y.height);
  double err = 0, energy = 0;
  for (int r = 1; r < y.height; ++r)
    for (int c = 1; c < y.width; ++c) {
      const double d = y(c, r) - round_trip(c, r);
      err += d * d;
      const double gx = y(c, r) - y(c - 1, r), gy = y(c, r) - y(c, r - 1);
      energy += gx * gx + gy * gy;
    }
  if (energy <= 0) return 1.0;
  const double retained = 1.0 - std::min(1.0, 8.0 * err / energy);
  return 1.0 + 3.0 * retained * retained;
}

double lowfps_score(const Clip& clip, const NominalFormat& nominal, bool& low_confidence) {
  if (nominal.fps) {
    low_confidence = false;
    return std::max(1.0, *nominal.fps / clip.fps());
  }
  // Burstiness proxy: repeated or dropped frames make consecutive-frame
  // differences alternate between near-zero and large.
  low_confidence = true;
  if (clip.size() < 3) return 1.0;
  std::vector<double> diffs;
  for (std::size_t i = 1; i < clip.size(); ++i) {
    double s = 0;
    const auto a = clip[i - 1].data(), b = clip[i].data();
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    diffs.push_back(s / a.size());
  }
  double mean = 0;
  for (double d : diffs) mean += d;
  mean /= diffs.size();
  if (mean <= 1e-9) return 1.0;
  double var = 0;
  for (double d : diffs) var += (d - mean) * (d - mean);
  const double cv = std::sqrt(var / diffs.size()) / mean;
  return 1.0 + cv * cv * 4.0;
}

DetectorReport run_detectors(const Clip& clip, const NominalFormat& nominal, std::size_t max_frames) {
  if (clip.empty()) throw InvalidArgument("cannot identify an empty clip");
  DetectorReport rep;
  const auto idx = sample_indices(clip.size(), max_frames);
  double noise = 0, blur = 0, block = 0, dark = 0, rain = 0, haze = 0;
  for (std::size_t i : idx) {
    const Frame& f = clip[i];
    const Plane y = f.luma();
    noise += noise_score(f);
    blur += blur_score(y);
    block += blockiness_score(y);
    dark += darkness_score(f);
    haze += dark_channel_score(f);
    const Frame* prev = i > 0 ? &clip[i - 1] : nullptr;
    const Frame* next = i + 1 < clip.size() ? &clip[i + 1] : nullptr;
    if (!prev || !next) {
      // Edge frames borrow both temporal neighbours from one side.
      if (clip.size() >= 3) {
        prev = i == 0 ? &clip[2] : prev;
        next = next ? next : &clip[i - 2];
      } else {
        prev = next = nullptr;
      }
    }
    rain += rain_score(f, prev, next);
  }
  const double n = double(idx.size());
  auto& s = rep.scores;
  s[index_of(DegradationKind::Noise)] = noise / n;
  s[index_of(DegradationKind::Blur)] = blur / n;
  s[index_of(DegradationKind::Compression)] = block / n;
  s[index_of(DegradationKind::LowLight)] = dark / n;
  s[index_of(DegradationKind::Rain)] = rain / n;
  s[index_of(DegradationKind::Haze)] = haze / n;
  bool lc = false;
  s[index_of(DegradationKind::LowRes)] = lowres_score(clip, nominal, lc);
  rep.low_confidence[index_of(DegradationKind::LowRes)] = lc;
  s[index_of(DegradationKind::LowFps)] = lowfps_score(clip, nominal, lc);
  rep.low_confidence[index_of(DegradationKind::LowFps)] = lc;
  rep.low_confidence[index_of(DegradationKind::Rain)] = clip.size() < 3;
  return rep;
}

}  // namespace vrestore
