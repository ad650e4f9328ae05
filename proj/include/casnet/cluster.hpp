#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "casnet/class_table.hpp"
#include "casnet/dense_map.hpp"
#include "casnet/geometry.hpp"
#include "casnet/panoptic.hpp"
#include "casnet/targets.hpp"

namespace casnet {

// A candidate instance: an NMS-surviving high-center-probability pixel with
// the box decoded from its own distance predictions.
struct Seed {
  std::uint16_t class_id = 0;
  PixelCoord anchor;             // working-grid coordinates
  Box box;                       // decoded at the anchor, working-grid units
  double score = 0.0;            // center probability at the anchor
  std::int64_t supporter_count = 0;
  Box calibrated_box;            // tight box over supporters, after voting
};

struct ClusterConfig {
  double seed_threshold = 0.5;
  double nms_iou = 0.5;
  // IoU gap under which the vote falls back to the nearer predicted center.
  double center_tiebreak_margin = 0.05;
  int min_instance_pixels = 1;
};

inline void validate_config(const ClusterConfig& cfg) {
  if (!(cfg.seed_threshold > 0.0 && cfg.seed_threshold < 1.0))
    throw std::invalid_argument("cluster: seed_threshold must be in (0,1)");
  if (!(cfg.nms_iou > 0.0 && cfg.nms_iou < 1.0))
    throw std::invalid_argument("cluster: nms_iou must be in (0,1)");
  if (cfg.center_tiebreak_margin < 0.0)
    throw std::invalid_argument("cluster: center_tiebreak_margin must be >= 0");
  if (cfg.min_instance_pixels < 0)
    throw std::invalid_argument("cluster: min_instance_pixels must be >= 0");
}

struct ClusterDiagnostics {
  std::int64_t n_candidates = 0;    // pixels past the seed threshold
  std::int64_t n_seeds = 0;         // surviving NMS and pruning
  std::int64_t n_pruned = 0;        // seeds dropped for lack of support
  std::int64_t n_orphan_pixels = 0; // thing-labeled pixels left at instance 0
  std::map<std::uint16_t, std::vector<std::int64_t>> supporters_per_class;
};

struct ClusterResult {
  PanopticMap panoptic;
  std::vector<Seed> seeds;          // index + 1 == instance id
  ClusterDiagnostics diagnostics;
};

// Per-pixel argmax over the class channels, ties toward the lowest class id.
inline LabelMap argmax_semantics(const FloatMap& logits) {
  if (logits.channels < 1)
    throw std::invalid_argument("argmax_semantics: no class channels");
  LabelMap labels;
  labels.height = logits.height;
  labels.width = logits.width;
  labels.stride = logits.stride;
  labels.data.assign(static_cast<std::size_t>(labels.cells()), 0);
  for (int r = 0; r < logits.height; ++r) {
    for (int c = 0; c < logits.width; ++c) {
      int best = 0;
      float hi = logits.at(0, r, c);
      for (int k = 1; k < logits.channels; ++k) {
        if (logits.at(k, r, c) > hi) {
          hi = logits.at(k, r, c);
          best = k;
        }
      }
      labels.at(r, c) = static_cast<std::uint16_t>(best);
    }
  }
  return labels;
}

namespace detail {

// Box decoded from the distance channels at one working-grid cell. Negative
// predictions are clamped to zero so the box always contains its anchor.
inline Box decode_box_at(const DistanceMaps& d, int r, int c) {
  DistanceVector v = d.at(r, c);
  v.left = std::max(0.0, v.left);
  v.top = std::max(0.0, v.top);
  v.right = std::max(0.0, v.right);
  v.bottom = std::max(0.0, v.bottom);
  return box_from_distances(PixelCoord{r, c}, v, 1);
}

}  // namespace detail

// Threshold the center map per thing class, decode candidate boxes, and run
// greedy score-descending NMS within each class. The returned list is sorted
// by descending score (then class id, then row-major anchor), so a seed's
// position doubles as its rank.
inline std::vector<Seed> extract_seeds(const PredictionBundle& bundle,
                                       const LabelMap& labels,
                                       const ClusterConfig& cfg) {
  if (labels.height != bundle.height() || labels.width != bundle.width())
    throw std::invalid_argument("extract_seeds: label map disagrees on shape");

  std::vector<Seed> kept;
  std::vector<Seed> candidates;
  for (std::uint16_t cls : bundle.classes.thing_ids()) {
    candidates.clear();
    for (int r = 0; r < labels.height; ++r) {
      for (int c = 0; c < labels.width; ++c) {
        if (labels.at(r, c) != cls) continue;
        const double p = bundle.center.at(r, c);
        if (p < cfg.seed_threshold) continue;
        Seed s;
        s.class_id = cls;
        s.anchor = PixelCoord{r, c};
        s.box = detail::decode_box_at(bundle.distances, r, c);
        s.score = p;
        candidates.push_back(s);
      }
    }
    // row-major gathering makes the stable sort break score ties by anchor
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Seed& a, const Seed& b) { return a.score > b.score; });
    std::size_t first_of_class = kept.size();
    for (const Seed& cand : candidates) {
      bool suppressed = false;
      for (std::size_t i = first_of_class; i < kept.size(); ++i) {
        if (iou(cand.box, kept[i].box) > cfg.nms_iou) {
          suppressed = true;
          break;
        }
      }
      if (!suppressed) kept.push_back(cand);
    }
  }

  std::sort(kept.begin(), kept.end(), [](const Seed& a, const Seed& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    if (a.anchor.row != b.anchor.row) return a.anchor.row < b.anchor.row;
    return a.anchor.col < b.anchor.col;
  });
  return kept;
}

// Common attribute support vote: every thing-labeled pixel decodes its own
// box and joins the same-class seed it overlaps best. When the top two IoUs
// are within the margin, the pixel sides with the seed whose box center lies
// nearest its own box center. Instance ids are provisional (seed index + 1);
// prune_and_merge assigns the final numbering.
inline PanopticMap assign_instances(const LabelMap& labels,
                                    const DistanceMaps& distances,
                                    std::vector<Seed>& seeds,
                                    const ClusterConfig& cfg,
                                    const ClassTable& table) {
  if (labels.height != distances.valid.height ||
      labels.width != distances.valid.width)
    throw std::invalid_argument(
        "assign_instances: labels and distances disagree on shape");

  PanopticMap p;
  p.class_map = labels;
  p.instance_map.height = labels.height;
  p.instance_map.width = labels.width;
  p.instance_map.stride = labels.stride;
  p.instance_map.data.assign(static_cast<std::size_t>(labels.cells()), 0);

  std::map<std::uint16_t, std::vector<std::size_t>> seeds_of_class;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    seeds_of_class[seeds[i].class_id].push_back(i);

  struct Extent {
    int min_row = std::numeric_limits<int>::max();
    int min_col = std::numeric_limits<int>::max();
    int max_row = -1;
    int max_col = -1;
  };
  std::vector<Extent> extents(seeds.size());
  for (Seed& s : seeds) {
    s.supporter_count = 0;
    s.calibrated_box = Box{};
  }

  for (int r = 0; r < labels.height; ++r) {
    for (int c = 0; c < labels.width; ++c) {
      const std::uint16_t cls = labels.at(r, c);
      if (!table.is_thing(cls)) continue;
      const auto it = seeds_of_class.find(cls);
      if (it == seeds_of_class.end()) continue;  // no seeds: stays instance 0
      const std::vector<std::size_t>& pool = it->second;

      const Box bu = detail::decode_box_at(distances, r, c);
      std::size_t best = pool[0];
      double best_iou = iou(bu, seeds[pool[0]].box);
      std::size_t second = pool[0];
      double second_iou = -1.0;
      for (std::size_t k = 1; k < pool.size(); ++k) {
        const double v = iou(bu, seeds[pool[k]].box);
        if (v > best_iou) {
          second = best;
          second_iou = best_iou;
          best = pool[k];
          best_iou = v;
        } else if (v > second_iou) {
          second = pool[k];
          second_iou = v;
        }
      }

      std::size_t chosen = best;
      if (pool.size() > 1 && best_iou - second_iou < cfg.center_tiebreak_margin) {
        const Point pu = center_of(bu);
        const double d_best = squared_distance(center_of(seeds[best].box), pu);
        const double d_second =
            squared_distance(center_of(seeds[second].box), pu);
        if (d_second < d_best ||
            (d_second == d_best && second < best))
          chosen = second;
      }

      p.instance_map.at(r, c) = static_cast<std::uint16_t>(chosen + 1);
      seeds[chosen].supporter_count += 1;
      Extent& e = extents[chosen];
      e.min_row = std::min(e.min_row, r);
      e.min_col = std::min(e.min_col, c);
      e.max_row = std::max(e.max_row, r);
      e.max_col = std::max(e.max_col, c);
    }
  }

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].supporter_count == 0) continue;
    const Extent& e = extents[i];
    seeds[i].calibrated_box = Box{static_cast<double>(e.min_col),
                                  static_cast<double>(e.min_row),
                                  static_cast<double>(e.max_col + 1),
                                  static_cast<double>(e.max_row + 1)};
  }

  rebuild_segments(p);
  return p;
}

// Drop seeds that gathered fewer supporters than required, demote their
// pixels to instance 0, renumber the survivors 1..k in score order, and
// merge the result with the stuff labels into a final partition.
inline PanopticMap prune_and_merge(PanopticMap things, std::vector<Seed>& seeds,
                                   const LabelMap& labels,
                                   const ClusterConfig& cfg) {
  if (!things.class_map.same_shape(labels))
    throw std::invalid_argument("prune_and_merge: label map disagrees on shape");
  things.class_map = labels;

  std::vector<std::uint16_t> renumber(seeds.size() + 1, 0);
  std::vector<Seed> survivors;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].supporter_count < cfg.min_instance_pixels) continue;
    survivors.push_back(seeds[i]);
    renumber[i + 1] = static_cast<std::uint16_t>(survivors.size());
  }

  for (std::uint16_t& id : things.instance_map.data) {
    if (id >= renumber.size())
      throw std::invalid_argument("prune_and_merge: instance id without a seed");
    id = renumber[id];
  }
  seeds = std::move(survivors);

  rebuild_segments(things);
  return things;
}

// Full post-processing chain:
// argmax -> seed extraction -> support vote -> prune/merge.
inline ClusterResult run_pipeline(const PredictionBundle& bundle,
                                  const ClusterConfig& cfg = {}) {
  check_bundle(bundle);
  validate_config(cfg);

  ClusterResult out;
  const LabelMap labels = argmax_semantics(bundle.logits);

  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c)
      if (bundle.classes.is_thing(labels.at(r, c)) &&
          bundle.center.at(r, c) >= cfg.seed_threshold)
        out.diagnostics.n_candidates += 1;

  out.seeds = extract_seeds(bundle, labels, cfg);
  const std::int64_t pre_prune = static_cast<std::int64_t>(out.seeds.size());

  PanopticMap things =
      assign_instances(labels, bundle.distances, out.seeds, cfg, bundle.classes);
  out.panoptic = prune_and_merge(std::move(things), out.seeds, labels, cfg);

  out.diagnostics.n_seeds = static_cast<std::int64_t>(out.seeds.size());
  out.diagnostics.n_pruned = pre_prune - out.diagnostics.n_seeds;
  for (const Seed& s : out.seeds)
    out.diagnostics.supporters_per_class[s.class_id].push_back(
        s.supporter_count);
  for (int r = 0; r < labels.height; ++r)
    for (int c = 0; c < labels.width; ++c)
      if (bundle.classes.is_thing(labels.at(r, c)) &&
          out.panoptic.instance_map.at(r, c) == 0)
        out.diagnostics.n_orphan_pixels += 1;

  return out;
}

}  // namespace casnet
