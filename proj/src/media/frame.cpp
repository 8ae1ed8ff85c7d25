#include "vrestore/media/frame.hpp"

#include "vrestore/error.hpp"

namespace vrestore {

Frame::Frame(int width, int height, float fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InvalidArgument("frame dimensions must be >= 1");
  data_.assign(pixel_count() * kChannels, std::clamp(fill, 0.f, 1.f));
}

Frame::Frame(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) throw InvalidArgument("frame dimensions must be >= 1");
  if (data_.size() != pixel_count() * kChannels)
    throw InvalidArgument("frame data length does not match width*height*3");
  clamp();
}

void Frame::clamp() {
  for (float& v : data_) v = std::clamp(v, 0.f, 1.f);
}

Plane Frame::channel(int c) const {
  Plane p(width_, height_);
  const std::size_t n = pixel_count();
  for (std::size_t i = 0; i < n; ++i) p.v[i] = data_[i * kChannels + c];
  return p;
}

void Frame::set_channel(int c, const Plane& p) {
  if (p.width != width_ || p.height != height_) throw InvalidArgument("plane/frame size mismatch");
  const std::size_t n = pixel_count();
  for (std::size_t i = 0; i < n; ++i) data_[i * kChannels + c] = std::clamp(p.v[i], 0.f, 1.f);
}

Plane Frame::luma() const {
  Plane p(width_, height_);
  const std::size_t n = pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const float* px = &data_[i * kChannels];
    p.v[i] = 0.299f * px[0] + 0.587f * px[1] + 0.114f * px[2];
  }
  return p;
}

Clip::Clip(std::string id, double fps, std::vector<Frame> frames)
    : id_(std::move(id)), fps_(fps), frames_(std::move(frames)) {
  if (frames_.empty()) throw InvalidArgument("clip must contain at least one frame");
  if (!(fps_ > 0.0)) throw InvalidArgument("clip fps must be positive");
  const auto& f0 = frames_.front();
  for (const auto& f : frames_) {
    if (f.width() != f0.width() || f.height() != f0.height())
      throw InvalidArgument("clip frames must share dimensions");
  }
}

Clip Clip::with_id(std::string id) const {
  Clip c = *this;
  c.id_ = std::move(id);
  return c;
}

bool same_shape(const Clip& a, const Clip& b) {
  return a.size() == b.size() && a.width() == b.width() && a.height() == b.height();
}

std::vector<std::size_t> sample_indices(std::size_t frame_count, std::size_t max_count) {
  std::vector<std::size_t> out;
  if (frame_count == 0 || max_count == 0) return out;
  if (frame_count <= max_count) {
    for (std::size_t i = 0; i < frame_count; ++i) out.push_back(i);
    return out;
  }
  if (max_count == 1) return {0};
  for (std::size_t k = 0; k < max_count; ++k) out.push_back(k * (frame_count - 1) / (max_count - 1));
  return out;
}

}  // namespace vrestore
