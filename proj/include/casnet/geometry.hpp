#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace casnet {

// Pixel position on a grid, (row, col).
struct PixelCoord {
  int row = 0;
  int col = 0;
  bool operator==(const PixelCoord&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box over half-open intervals [left, right) x [top, bottom).
// Pixel p covers [p, p+1), so a single pixel (r, c) is Box(c, r, c+1, r+1).
struct Box {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  bool valid() const { return left < right && top < bottom; }
  bool operator==(const Box&) const = default;
};

// Per-pixel distances to the four box borders, in pixels at the working
// stride.  All components are >= 0.
struct DistanceVector {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;
  bool operator==(const DistanceVector&) const = default;
};

// Decode the box a pixel describes.  The trailing +1 makes a pixel with
// all-zero distances decode to its own 1x1 box, so encode/decode is an
// exact bijection on pixel-aligned boxes at stride 1.  Boxes may extend
// past the image; clipping happens only at rasterization.
inline Box box_from_distances(PixelCoord u, const DistanceVector& d,
                              int stride) {
  return Box{u.col - d.left * stride, u.row - d.top * stride,
             u.col + d.right * stride + 1.0, u.row + d.bottom * stride + 1.0};
}

// Distances from pixel u to the borders of box b, in full-resolution pixels
// divided by `stride`.  Inverse of box_from_distances for u inside b.
inline DistanceVector distances_to_box(PixelCoord u, const Box& b,
                                       int stride) {
  const double s = stride;
  return DistanceVector{(u.col - b.left) / s, (u.row - b.top) / s,
                        (b.right - 1.0 - u.col) / s,
                        (b.bottom - 1.0 - u.row) / s};
}

inline double iou(const Box& a, const Box& b) {
  const double iw =
      std::min(a.right, b.right) - std::max(a.left, b.left);
  const double ih =
      std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

inline Point center_of(const Box& b) {
  return Point{(b.left + b.right) / 2.0, (b.top + b.bottom) / 2.0};
}

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace casnet
