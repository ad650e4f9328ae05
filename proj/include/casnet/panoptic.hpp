#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "casnet/class_table.hpp"
#include "casnet/dense_map.hpp"

namespace casnet {

struct Segment {
  std::uint16_t class_id = 0;
  std::uint16_t instance_id = 0;  // 0 for stuff, void, and seedless regions
  std::int64_t pixel_count = 0;
  bool operator==(const Segment&) const = default;
};

// Per-pixel (class, instance) pairs plus the segment list.  The two maps
// tile the grid, so the partition property (no overlaps, no holes) holds by
// representation; validate_partition checks everything the representation
// cannot enforce.
struct PanopticMap {
  LabelMap class_map;
  LabelMap instance_map;
  std::vector<Segment> segments;

  int height() const { return class_map.height; }
  int width() const { return class_map.width; }
  int stride() const { return class_map.stride; }

  bool operator==(const PanopticMap&) const = default;
};

// Canonical segment list: one entry per distinct (class, instance) pair,
// sorted by (class, instance).
inline std::vector<Segment> scan_segments(const LabelMap& class_map,
                                          const LabelMap& instance_map) {
  std::map<std::pair<std::uint16_t, std::uint16_t>, std::int64_t> counts;
  for (std::size_t i = 0; i < class_map.cells(); ++i)
    ++counts[{class_map.data[i], instance_map.data[i]}];
  std::vector<Segment> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n});
  return out;
}

inline void rebuild_segments(PanopticMap& p) {
  p.segments = scan_segments(p.class_map, p.instance_map);
}

// Empty iff the map is a well-formed panoptic partition under `table`:
// maps agree on shape, the segment list matches a fresh scan, instance ids
// appear only on thing classes, and classes are known.
inline std::vector<std::string> validate_partition(const PanopticMap& p,
                                                   const ClassTable& table) {
  std::vector<std::string> out;
  if (!p.class_map.same_shape(p.instance_map)) {
    out.push_back("shape mismatch between class map and instance map");
    return out;
  }
  for (int r = 0; r < p.height(); ++r) {
    for (int c = 0; c < p.width(); ++c) {
      const std::uint16_t cls = p.class_map.at(r, c);
      const std::uint16_t inst = p.instance_map.at(r, c);
      if (cls >= table.size()) {
        out.push_back("unknown class " + std::to_string(cls) + " at (" +
                      std::to_string(r) + "," + std::to_string(c) + ")");
        return out;
      }
      if (inst != 0 && !table.is_thing(cls)) {
        out.push_back("instance id " + std::to_string(inst) +
                      " on non-thing class " + std::to_string(cls) + " at (" +
                      std::to_string(r) + "," + std::to_string(c) + ")");
        if (out.size() > 16) return out;
      }
    }
  }
  const std::vector<Segment> fresh = scan_segments(p.class_map, p.instance_map);
  std::vector<Segment> listed = p.segments;
  std::sort(listed.begin(), listed.end(), [](const Segment& a, const Segment& b) {
    return std::tie(a.class_id, a.instance_id) <
           std::tie(b.class_id, b.instance_id);
  });
  if (listed != fresh)
    out.push_back("segment list does not match map contents");
  return out;
}

}  // namespace casnet
