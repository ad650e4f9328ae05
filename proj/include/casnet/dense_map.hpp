#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace casnet {

// Dense H x W map with one or more channels.  Storage is channel-major,
// row-major within a channel: data[(c*H + r)*W + col].  `stride` records
// the ratio between full input resolution and this grid's resolution.
template <typename T>
struct DenseMap {
  int height = 0;
  int width = 0;
  int channels = 1;
  int stride = 1;
  std::vector<T> data;

  DenseMap() = default;
  DenseMap(int h, int w, int c = 1, int s = 1, T fill = T{})
      : height(h), width(w), channels(c), stride(s),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  std::size_t cells() const {
    return static_cast<std::size_t>(height) * width;
  }
  std::size_t size() const { return cells() * channels; }

  std::size_t index(int c, int r, int col) const {
    return (static_cast<std::size_t>(c) * height + r) * width + col;
  }

  T& at(int c, int r, int col) { return data[index(c, r, col)]; }
  const T& at(int c, int r, int col) const { return data[index(c, r, col)]; }
  T& at(int r, int col) { return data[index(0, r, col)]; }
  const T& at(int r, int col) const { return data[index(0, r, col)]; }

  bool same_shape(const DenseMap& o) const {
    return height == o.height && width == o.width && channels == o.channels &&
           stride == o.stride;
  }

  bool operator==(const DenseMap& o) const {
    return same_shape(o) && data == o.data;
  }
};

using LabelMap = DenseMap<std::uint16_t>;
using FloatMap = DenseMap<float>;

// Top-left pick per stride block.
template <typename T>
DenseMap<T> subsample(const DenseMap<T>& m, int stride) {
  if (stride < 1 || m.height % stride != 0 || m.width % stride != 0)
    throw std::invalid_argument("subsample: stride must divide map dimensions");
  DenseMap<T> out(m.height / stride, m.width / stride, m.channels,
                  m.stride * stride);
  for (int c = 0; c < m.channels; ++c)
    for (int r = 0; r < out.height; ++r)
      for (int col = 0; col < out.width; ++col)
        out.at(c, r, col) = m.at(c, r * stride, col * stride);
  return out;
}

}  // namespace casnet
