#pragma once

#include <cstddef>
#include <optional>

namespace vrestore {

// Target format a restored clip should reach. Absolute "lowness" of
// resolution or frame rate is only defined relative to this.
struct NominalFormat {
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> fps;
  std::optional<std::size_t> frames;

  bool has_resolution() const { return width && height; }
};

}  // namespace vrestore
