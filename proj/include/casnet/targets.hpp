#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "casnet/class_table.hpp"
#include "casnet/dense_map.hpp"
#include "casnet/geometry.hpp"
#include "casnet/scene.hpp"

namespace casnet {

// Four distance channels in (left, top, right, bottom) order plus the mask
// of cells that carry supervision (cells whose representative pixel belongs
// to a thing instance).  Values are zero where the mask is false.
struct DistanceMaps {
  FloatMap values;  // 4 channels
  LabelMap valid;   // 1 where a thing instance exists

  DistanceVector at(int r, int c) const {
    return DistanceVector{values.at(0, r, c), values.at(1, r, c),
                          values.at(2, r, c), values.at(3, r, c)};
  }
  void set(int r, int c, const DistanceVector& d) {
    values.at(0, r, c) = static_cast<float>(d.left);
    values.at(1, r, c) = static_cast<float>(d.top);
    values.at(2, r, c) = static_cast<float>(d.right);
    values.at(3, r, c) = static_cast<float>(d.bottom);
  }
  bool operator==(const DistanceMaps&) const = default;
};

// The three head outputs on one working grid.
struct PredictionBundle {
  ClassTable classes;
  FloatMap logits;      // C channels, C = class count incl. void
  DistanceMaps distances;
  FloatMap center;      // probabilities in [0, 1]

  int height() const { return logits.height; }
  int width() const { return logits.width; }
  int stride() const { return logits.stride; }
  bool operator==(const PredictionBundle&) const = default;
};

inline void check_bundle(const PredictionBundle& b) {
  const auto& l = b.logits;
  if (l.channels != static_cast<int>(b.classes.size()))
    throw std::invalid_argument("bundle: logit channels != class count");
  if (b.distances.values.channels != 4)
    throw std::invalid_argument("bundle: distance maps need 4 channels");
  const bool aligned =
      b.distances.values.height == l.height &&
      b.distances.values.width == l.width &&
      b.distances.values.stride == l.stride &&
      b.distances.valid.height == l.height &&
      b.distances.valid.width == l.width && b.center.height == l.height &&
      b.center.width == l.width && b.center.stride == l.stride;
  if (!aligned)
    throw std::invalid_argument("bundle: maps disagree on grid shape");
}

// Margin used for one-hot logits and for converting probabilities to raw
// scores: large enough that losses at ground truth are ~1e-5, small enough
// to stay finite.
inline constexpr double kOneHotMargin = 10.0;

// Label pick on the working grid: top-left pixel of each stride block.
inline LabelMap subsample_labels(const InstanceScene& s, int stride) {
  return subsample(s.semantic_map, stride);
}

// Encode a scene into the three supervision targets.
//
// - logits: one-hot (+kOneHotMargin on the true class) of the subsampled
//   semantic map;
// - distances: per-side pixel distances from each thing cell's
//   representative pixel to its instance's tight box, divided by stride;
// - center: 1 on the cells of each instance that fall in the central
//   sub-box of its tight box (each side scaled by center_fraction, minimum
//   1x1, centered on the box's center cell).  An instance whose central
//   sub-box misses all of its cells on this grid gets its cell nearest the
//   box center instead, so every instance that survives subsampling keeps
//   at least one positive cell.
inline PredictionBundle make_targets(const InstanceScene& s, int stride,
                                     double center_fraction) {
  if (stride < 1 || s.height % stride != 0 || s.width % stride != 0)
    throw std::invalid_argument("make_targets: stride must divide dimensions");
  if (!(center_fraction > 0.0 && center_fraction <= 1.0))
    throw std::invalid_argument("make_targets: center_fraction not in (0,1]");

  const int hh = s.height / stride;
  const int ww = s.width / stride;
  const int n_classes = static_cast<int>(s.classes.size());

  PredictionBundle b;
  b.classes = s.classes;
  b.logits = FloatMap(hh, ww, n_classes, stride);
  b.distances.values = FloatMap(hh, ww, 4, stride);
  b.distances.valid = LabelMap(hh, ww, 1, stride);
  b.center = FloatMap(hh, ww, 1, stride);

  const LabelMap labels = subsample_labels(s, stride);
  const LabelMap inst = subsample(s.instance_map, stride);

  std::uint16_t max_id = 0;
  for (const auto& rec : s.instances) max_id = std::max(max_id, rec.instance_id);
  std::vector<const InstanceRecord*> by_id(max_id + 1, nullptr);
  for (const auto& rec : s.instances) by_id[rec.instance_id] = &rec;

  for (int r = 0; r < hh; ++r) {
    for (int c = 0; c < ww; ++c) {
      b.logits.at(labels.at(r, c), r, c) = static_cast<float>(kOneHotMargin);
      const std::uint16_t id = inst.at(r, c);
      if (id == 0) continue;
      if (id > max_id || by_id[id] == nullptr)
        throw std::invalid_argument("make_targets: instance id missing a record");
      const PixelCoord full{r * stride, c * stride};
      b.distances.set(r, c, distances_to_box(full, by_id[id]->box, stride));
      b.distances.valid.at(r, c) = 1;
    }
  }

  for (const InstanceRecord& rec : s.instances) {
    const Box& box = rec.box;
    const int bw = static_cast<int>(std::lround(box.width()));
    const int bh = static_cast<int>(std::lround(box.height()));
    const int cw = std::max(1, static_cast<int>(center_fraction * bw));
    const int ch = std::max(1, static_cast<int>(center_fraction * bh));
    // center cell of the box, then a cw x ch block around it
    const int ccol = static_cast<int>(std::lround(box.left)) + (bw - 1) / 2;
    const int crow = static_cast<int>(std::lround(box.top)) + (bh - 1) / 2;
    const int col0 = ccol - (cw - 1) / 2;
    const int row0 = crow - (ch - 1) / 2;

    // only cells inside the tight box can belong to the instance
    const int r_lo = std::max(0, static_cast<int>(std::floor(box.top)) / stride);
    const int r_hi = std::min(hh - 1,
                              static_cast<int>(std::ceil(box.bottom)) / stride);
    const int c_lo = std::max(0, static_cast<int>(std::floor(box.left)) / stride);
    const int c_hi = std::min(ww - 1,
                              static_cast<int>(std::ceil(box.right)) / stride);

    bool any = false;
    int best_r = -1, best_c = -1;
    double best_d2 = std::numeric_limits<double>::max();
    const Point center = center_of(box);
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        if (inst.at(r, c) != rec.instance_id) continue;
        const int fr = r * stride;
        const int fc = c * stride;
        if (fr >= row0 && fr < row0 + ch && fc >= col0 && fc < col0 + cw) {
          b.center.at(r, c) = 1.0f;
          any = true;
        }
        const double d2 =
            squared_distance(center, Point{fc + 0.5, fr + 0.5});
        if (d2 < best_d2) {
          best_d2 = d2;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (!any && best_r >= 0) b.center.at(best_r, best_c) = 1.0f;
  }

  return b;
}

}  // namespace casnet
