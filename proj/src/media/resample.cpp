#include "vrestore/media/resample.hpp"

#include <cmath>
#include <vector>

#include "vrestore/error.hpp"
#include "vrestore/media/filter.hpp"

namespace vrestore {

double cubic_weight(double x, double a) {
  x = std::abs(x);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

namespace {

struct Contribution {
  int first = 0;
  std::vector<float> weights;
};

std::vector<Contribution> contributions(int src_size, int dst_size) {
  const double scale = double(src_size) / dst_size;
  const double support = scale > 1.0 ? 2.0 * scale : 2.0;
  const double stretch = scale > 1.0 ? scale : 1.0;
  std::vector<Contribution> out(dst_size);
  for (int d = 0; d < dst_size; ++d) {
    const double centre = (d + 0.5) * scale - 0.5;
    const int lo = static_cast<int>(std::floor(centre - support)) + 1;
    const int hi = static_cast<int>(std::ceil(centre + support)) - 1;
    Contribution& c = out[d];
    c.first = lo;
    double total = 0.0;
    std::vector<double> w;
    for (int s = lo; s <= hi; ++s) {
      w.push_back(cubic_weight((s - centre) / stretch));
      total += w.back();
    }
    c.weights.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) c.weights[i] = static_cast<float>(w[i] / total);
  }
  return out;
}

}  // namespace

Plane resample_bicubic(const Plane& p, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw InvalidArgument("resample target dimensions must be >= 1");
  const auto cx = contributions(p.width, new_width);
  const auto cy = contributions(p.height, new_height);
  Plane tmp(new_width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < new_width; ++x) {
      const auto& c = cx[x];
      double acc = 0.0;
      for (std::size_t i = 0; i < c.weights.size(); ++i)
        acc += double(c.weights[i]) * p(std::clamp(c.first + int(i), 0, p.width - 1), y);
      tmp(x, y) = static_cast<float>(acc);
    }
  Plane out(new_width, new_height);
  for (int y = 0; y < new_height; ++y) {
    const auto& c = cy[y];
    for (int x = 0; x < new_width; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < c.weights.size(); ++i)
        acc += double(c.weights[i]) * tmp(x, std::clamp(c.first + int(i), 0, p.height - 1));
      out(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

Frame resample_bicubic(const Frame& frame, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw InvalidArgument("resample target dimensions must be >= 1");
  Frame out(new_width, new_height);
  for (int c = 0; c < 3; ++c) out.set_channel(c, resample_bicubic(frame.channel(c), new_width, new_height));
  return out;
}

}  // namespace vrestore
