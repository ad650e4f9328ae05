#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "casnet/class_table.hpp"
#include "casnet/panoptic.hpp"

namespace casnet {

struct PQClassStats {
  std::uint16_t class_id = 0;
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

struct PQAggregate {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  std::int64_t n_classes = 0;
};

struct PQReport {
  std::vector<PQClassStats> per_class;  // sorted by class id
  PQAggregate all;
  PQAggregate things;
  PQAggregate stuff;
};

// Panoptic quality after Kirillov et al.: segments match iff IoU > 0.5, with
// GT void pixels excluded from the union. Unmatched prediction segments
// always count as false positives. Class 0 never forms a segment on either
// side; thing pixels that ended up with instance 0 do form (class, 0)
// segments and can therefore cost the prediction an FP.
inline PQReport panoptic_quality(const PanopticMap& pred, const PanopticMap& gt,
                                 const ClassTable& table) {
  if (pred.height() != gt.height() || pred.width() != gt.width())
    throw std::invalid_argument("panoptic_quality: maps disagree on shape");
  table.validate();

  using Key = std::pair<std::uint16_t, std::uint16_t>;  // (class, instance)
  std::map<Key, std::int64_t> pred_area, gt_area, pred_void;
  std::map<std::pair<Key, Key>, std::int64_t> inter;

  const int h = pred.height(), w = pred.width();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const Key pk{pred.class_map.at(r, c), pred.instance_map.at(r, c)};
      const Key gk{gt.class_map.at(r, c), gt.instance_map.at(r, c)};
      if (pk.first >= table.classes.size() || gk.first >= table.classes.size())
        throw std::invalid_argument("panoptic_quality: class outside the table");
      if (pk.first != 0) {
        pred_area[pk] += 1;
        if (gk.first == 0) pred_void[pk] += 1;
      }
      if (gk.first != 0) gt_area[gk] += 1;
      if (pk.first != 0 && gk.first != 0) inter[{pk, gk}] += 1;
    }
  }

  struct ClassAcc {
    std::int64_t tp = 0, fp = 0, fn = 0;
    double iou_sum = 0.0;
  };
  std::map<std::uint16_t, ClassAcc> acc;
  for (const auto& [k, a] : gt_area) acc[k.first].fn += 1;
  for (const auto& [k, a] : pred_area) acc[k.first].fp += 1;

  for (const auto& [keys, n] : inter) {
    const auto& [pk, gk] = keys;
    if (pk.first != gk.first) continue;
    const double void_overlap = static_cast<double>(pred_void.count(pk) ? pred_void[pk] : 0);
    const double uni = static_cast<double>(pred_area[pk]) +
                       static_cast<double>(gt_area[gk]) -
                       static_cast<double>(n) - void_overlap;
    const double v = uni > 0.0 ? static_cast<double>(n) / uni : 0.0;
    if (v > 0.5) {
      ClassAcc& a = acc[pk.first];
      a.tp += 1;
      a.fp -= 1;  // matched prediction is no longer a false positive
      a.fn -= 1;
      a.iou_sum += v;
    }
  }

  PQReport rep;
  for (const auto& [cls, a] : acc) {
    PQClassStats s;
    s.class_id = cls;
    s.tp = a.tp;
    s.fp = a.fp;
    s.fn = a.fn;
    s.sq = a.tp > 0 ? a.iou_sum / static_cast<double>(a.tp) : 0.0;
    const double denom = static_cast<double>(a.tp) + 0.5 * a.fp + 0.5 * a.fn;
    s.rq = denom > 0.0 ? static_cast<double>(a.tp) / denom : 0.0;
    s.pq = s.sq * s.rq;
    rep.per_class.push_back(s);
  }

  auto add = [](PQAggregate& agg, const PQClassStats& s) {
    agg.pq += s.pq;
    agg.sq += s.sq;
    agg.rq += s.rq;
    agg.n_classes += 1;
  };
  for (const PQClassStats& s : rep.per_class) {
    if (s.tp + s.fp + s.fn == 0) continue;
    add(rep.all, s);
    if (table.is_thing(s.class_id))
      add(rep.things, s);
    else
      add(rep.stuff, s);
  }
  auto mean = [](PQAggregate& agg) {
    if (agg.n_classes == 0) return;
    agg.pq /= static_cast<double>(agg.n_classes);
    agg.sq /= static_cast<double>(agg.n_classes);
    agg.rq /= static_cast<double>(agg.n_classes);
  };
  mean(rep.all);
  mean(rep.things);
  mean(rep.stuff);
  return rep;
}

struct APClassStats {
  std::uint16_t class_id = 0;
  double ap = 0.0;    // mean over IoU thresholds 0.50:0.05:0.95
  double ap50 = 0.0;  // at threshold 0.50
  std::int64_t n_gt = 0;
};

struct APReport {
  std::vector<APClassStats> per_class;  // thing classes with GT instances
  double map = 0.0;
  double map50 = 0.0;
  std::int64_t n_classes = 0;
};

inline std::vector<double> ap_iou_thresholds() {
  std::vector<double> t;
  for (int k = 0; k < 10; ++k) t.push_back(static_cast<double>(50 + 5 * k) / 100.0);
  return t;
}

// Dataset-pooled instance AP in the Cityscapes style: detections from all
// images are ranked together by score; at each IoU threshold a detection
// greedily claims the unmatched same-class GT instance of its own image with
// the highest mask IoU. Classes with at least one GT instance contribute to
// the mean.
class APEvaluator {
 public:
  explicit APEvaluator(const ClassTable& table) : table_(table) {
    table_.validate();
  }

  // scores: instance_id -> confidence for every thing segment of pred with
  // instance_id > 0. A missing entry is an error.
  void add_image(const PanopticMap& pred,
                 const std::map<std::uint16_t, double>& scores,
                 const PanopticMap& gt) {
    if (pred.height() != gt.height() || pred.width() != gt.width())
      throw std::invalid_argument("ap: pred and gt maps disagree on shape");

    using Key = std::pair<std::uint16_t, std::uint16_t>;
    std::map<Key, std::int64_t> pred_area, gt_area;
    std::map<std::pair<Key, Key>, std::int64_t> inter;
    const int h = pred.height(), w = pred.width();
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const Key pk{pred.class_map.at(r, c), pred.instance_map.at(r, c)};
        const Key gk{gt.class_map.at(r, c), gt.instance_map.at(r, c)};
        const bool p_inst = pk.second != 0 && table_.is_thing(pk.first);
        const bool g_inst = gk.second != 0 && table_.is_thing(gk.first);
        if (p_inst) pred_area[pk] += 1;
        if (g_inst) gt_area[gk] += 1;
        if (p_inst && g_inst && pk.first == gk.first) inter[{pk, gk}] += 1;
      }
    }

    std::map<Key, std::int64_t> gt_index;
    for (const auto& [k, a] : gt_area) {
      gt_index[k] = n_gt_;
      gt_count_[k.first] += 1;
      n_gt_ += 1;
    }

    std::map<Key, std::size_t> det_index;
    for (const auto& [k, a] : pred_area) {
      const auto it = scores.find(k.second);
      if (it == scores.end())
        throw std::invalid_argument("ap: prediction instance without a score");
      det_index[k] = dets_.size();
      dets_.push_back(Det{k.first, it->second, {}});
    }

    for (const auto& [keys, n] : inter) {
      const auto& [pk, gk] = keys;
      const double uni = static_cast<double>(pred_area[pk] + gt_area[gk] - n);
      dets_[det_index[pk]].overlaps.push_back(
          {gt_index[gk], static_cast<double>(n) / uni});
    }
  }

  APReport finalize() const {
    std::vector<std::size_t> order(dets_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return dets_[a].score > dets_[b].score;
                     });

    const std::vector<double> thresholds = ap_iou_thresholds();
    APReport rep;
    for (const auto& [cls, count] : gt_count_) {
      if (count == 0) continue;
      APClassStats s;
      s.class_id = cls;
      s.n_gt = count;
      double sum = 0.0;
      for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
        const double ap = class_ap(cls, count, order, thresholds[ti]);
        if (ti == 0) s.ap50 = ap;
        sum += ap;
      }
      s.ap = sum / static_cast<double>(thresholds.size());
      rep.per_class.push_back(s);
      rep.map += s.ap;
      rep.map50 += s.ap50;
      rep.n_classes += 1;
    }
    if (rep.n_classes > 0) {
      rep.map /= static_cast<double>(rep.n_classes);
      rep.map50 /= static_cast<double>(rep.n_classes);
    }
    return rep;
  }

 private:
  struct Det {
    std::uint16_t cls = 0;
    double score = 0.0;
    std::vector<std::pair<std::int64_t, double>> overlaps;  // (gt idx, iou)
  };

  double class_ap(std::uint16_t cls, std::int64_t n_gt,
                  const std::vector<std::size_t>& order, double thr) const {
    std::vector<char> gt_used(static_cast<std::size_t>(n_gt_), 0);
    std::vector<double> recall, precision;
    std::int64_t tp = 0, fp = 0;
    for (std::size_t idx : order) {
      const Det& d = dets_[idx];
      if (d.cls != cls) continue;
      std::int64_t best_gt = -1;
      double best_iou = 0.0;
      for (const auto& [gi, v] : d.overlaps) {
        if (v < thr || gt_used[static_cast<std::size_t>(gi)]) continue;
        if (v > best_iou || (v == best_iou && (best_gt < 0 || gi < best_gt))) {
          best_iou = v;
          best_gt = gi;
        }
      }
      if (best_gt >= 0) {
        gt_used[static_cast<std::size_t>(best_gt)] = 1;
        tp += 1;
      } else {
        fp += 1;
      }
      recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
      precision.push_back(static_cast<double>(tp) /
                          static_cast<double>(tp + fp));
    }

    // all-point interpolation with the precision envelope made monotone
    const std::size_t n = recall.size();
    std::vector<double> mrec(n + 2), mpre(n + 2);
    mrec[0] = 0.0;
    mpre[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mrec[i + 1] = recall[i];
      mpre[i + 1] = precision[i];
    }
    mrec[n + 1] = 1.0;
    mpre[n + 1] = 0.0;
    for (std::size_t i = n + 1; i-- > 0;)
      mpre[i] = std::max(mpre[i], mpre[i + 1]);
    double ap = 0.0;
    for (std::size_t i = 0; i + 1 < mrec.size(); ++i)
      if (mrec[i + 1] != mrec[i]) ap += (mrec[i + 1] - mrec[i]) * mpre[i + 1];
    return ap;
  }

  ClassTable table_;
  std::vector<Det> dets_;
  std::map<std::uint16_t, std::int64_t> gt_count_;
  std::int64_t n_gt_ = 0;
};

// Single-image convenience wrapper.
inline APReport average_precision(const PanopticMap& pred,
                                  const std::map<std::uint16_t, double>& scores,
                                  const PanopticMap& gt,
                                  const ClassTable& table) {
  APEvaluator ev(table);
  ev.add_image(pred, scores, gt);
  return ev.finalize();
}

}  // namespace casnet
