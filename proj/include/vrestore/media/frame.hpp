#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vrestore {

// Single-channel float grid with no range contract; scratch space for
// detectors and filters.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> v;

  Plane() = default;
  Plane(int w, int h, float fill = 0.f) : width(w), height(h), v(std::size_t(w) * h, fill) {}

  float& operator()(int x, int y) { return v[std::size_t(y) * width + x]; }
  float operator()(int x, int y) const { return v[std::size_t(y) * width + x]; }
  float clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return (*this)(x, y);
  }
};

// RGB frame, row-major interleaved, intensities in [0,1].
class Frame {
 public:
  static constexpr int kChannels = 3;

  Frame() = default;
  Frame(int width, int height, float fill = 0.f);
  Frame(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return kChannels; }
  std::size_t pixel_count() const noexcept { return std::size_t(width_) * height_; }

  float operator()(int x, int y, int c) const { return data_[index(x, y, c)]; }
  float at_clamped(int x, int y, int c) const {
    return (*this)(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1), c);
  }
  void set(int x, int y, int c, float value) { data_[index(x, y, c)] = std::clamp(value, 0.f, 1.f); }

  std::span<const float> data() const noexcept { return data_; }
  // Raw write access; callers restore the [0,1] contract with clamp().
  std::span<float> mutable_data() noexcept { return data_; }
  void clamp();

  Plane channel(int c) const;
  void set_channel(int c, const Plane& p);
  // Rec.601 luma.
  Plane luma() const;

  bool operator==(const Frame& o) const = default;

 private:
  std::size_t index(int x, int y, int c) const { return (std::size_t(y) * width_ + x) * kChannels + c; }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Ordered frame sequence with uniform geometry.
class Clip {
 public:
  Clip() = default;
  Clip(std::string id, double fps, std::vector<Frame> frames);

  const std::string& id() const noexcept { return id_; }
  double fps() const noexcept { return fps_; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  std::size_t size() const noexcept { return frames_.size(); }
  bool empty() const noexcept { return frames_.empty(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  int width() const { return frames_.empty() ? 0 : frames_.front().width(); }
  int height() const { return frames_.empty() ? 0 : frames_.front().height(); }

  Clip with_id(std::string id) const;

  bool operator==(const Clip& o) const = default;

 private:
  std::string id_;
  double fps_ = 0.0;
  std::vector<Frame> frames_;
};

// Same geometry and frame count.
bool same_shape(const Clip& a, const Clip& b);

// Frame indices spread evenly across the clip, at most max_count of them.
std::vector<std::size_t> sample_indices(std::size_t frame_count, std::size_t max_count);

}  // namespace vrestore
