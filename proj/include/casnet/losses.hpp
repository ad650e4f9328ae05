#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casnet/dense_map.hpp"
#include "casnet/targets.hpp"

namespace casnet {

struct LossWeights {
  double alpha = 1.0;  // classification
  double beta = 1.0;   // common attribute (distance regression)
  double gamma = 1.0;  // center probability
};

struct LossReport {
  double l_cls = 0.0;
  double l_common = 0.0;
  double l_prob = 0.0;
  double l_total = 0.0;
};

// Mean cross entropy between per-pixel logits and hard labels, averaged over
// every pixel. Stabilised with the usual max-shift before the exp.
inline double ce_loss(const FloatMap& logits, const LabelMap& labels) {
  if (logits.height != labels.height || logits.width != labels.width)
    throw std::invalid_argument("ce_loss: logits and labels disagree on shape");
  if (logits.channels < 1)
    throw std::invalid_argument("ce_loss: logits need at least one channel");

  const int n_classes = logits.channels;
  double sum = 0.0;
  for (int r = 0; r < logits.height; ++r) {
    for (int c = 0; c < logits.width; ++c) {
      const std::uint16_t label = labels.at(r, c);
      if (label >= n_classes)
        throw std::invalid_argument("ce_loss: label outside logit channels");
      double hi = logits.at(0, r, c);
      for (int k = 1; k < n_classes; ++k)
        hi = std::max(hi, static_cast<double>(logits.at(k, r, c)));
      double z = 0.0;
      for (int k = 0; k < n_classes; ++k)
        z += std::exp(static_cast<double>(logits.at(k, r, c)) - hi);
      sum += hi + std::log(z) - static_cast<double>(logits.at(label, r, c));
    }
  }
  return sum / logits.cells();
}

// Mean absolute error over the four distance channels, restricted to cells
// the validity mask marks as thing cells. Both maps must agree on the mask.
inline double l1_common(const DistanceMaps& pred, const DistanceMaps& target) {
  if (!pred.values.same_shape(target.values))
    throw std::invalid_argument("l1_common: distance maps disagree on shape");
  if (pred.valid.data != target.valid.data)
    throw std::invalid_argument("l1_common: validity masks disagree");

  double sum = 0.0;
  std::int64_t n = 0;
  for (int r = 0; r < pred.valid.height; ++r) {
    for (int c = 0; c < pred.valid.width; ++c) {
      if (!pred.valid.at(r, c)) continue;
      for (int ch = 0; ch < 4; ++ch)
        sum += std::abs(static_cast<double>(pred.values.at(ch, r, c)) -
                        static_cast<double>(target.values.at(ch, r, c)));
      n += 4;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

// Mean binary cross entropy between raw scores and {0,1} targets, in the
// standard overflow-safe form max(x,0) - x*y + log(1 + exp(-|x|)).
inline double bce_prob(const FloatMap& scores, const FloatMap& target) {
  if (!scores.same_shape(target))
    throw std::invalid_argument("bce_prob: score maps disagree on shape");
  if (scores.channels != 1)
    throw std::invalid_argument("bce_prob: expected a single channel");

  double sum = 0.0;
  for (int r = 0; r < scores.height; ++r) {
    for (int c = 0; c < scores.width; ++c) {
      const double x = scores.at(r, c);
      const double y = target.at(r, c);
      sum += std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)));
    }
  }
  return sum / scores.cells();
}

inline LossReport total_loss(double l_cls, double l_common, double l_prob,
                             const LossWeights& w = {}) {
  LossReport rep;
  rep.l_cls = l_cls;
  rep.l_common = l_common;
  rep.l_prob = l_prob;
  rep.l_total = w.alpha * l_cls + w.beta * l_common + w.gamma * l_prob;
  return rep;
}

// Convert probabilities in [0,1] to raw scores via the logit, clamped so the
// extremes stay finite and consistent with the one-hot margin used for
// targets.
inline FloatMap center_scores_from_probs(const FloatMap& probs) {
  FloatMap scores = probs;
  const double lim = kOneHotMargin;
  for (float& v : scores.data) {
    const double p = v;
    double x;
    if (p <= 0.0) {
      x = -lim;
    } else if (p >= 1.0) {
      x = lim;
    } else {
      x = std::log(p / (1.0 - p));
      x = std::clamp(x, -lim, lim);
    }
    v = static_cast<float>(x);
  }
  return scores;
}

// Evaluate all three terms of the training objective for a prediction bundle
// against the targets built from the same scene.
inline LossReport bundle_loss(const PredictionBundle& pred,
                              const PredictionBundle& target,
                              const LossWeights& w = {}) {
  check_bundle(pred);
  check_bundle(target);
  if (pred.logits.channels != target.logits.channels)
    throw std::invalid_argument("bundle_loss: class counts disagree");
  if (pred.height() != target.height() || pred.width() != target.width())
    throw std::invalid_argument("bundle_loss: bundles disagree on shape");

  LabelMap labels;
  labels.height = target.height();
  labels.width = target.width();
  labels.stride = target.logits.stride;
  labels.data.assign(static_cast<std::size_t>(labels.cells()), 0);
  for (int r = 0; r < labels.height; ++r) {
    for (int c = 0; c < labels.width; ++c) {
      int best = 0;
      float hi = target.logits.at(0, r, c);
      for (int k = 1; k < target.logits.channels; ++k) {
        if (target.logits.at(k, r, c) > hi) {
          hi = target.logits.at(k, r, c);
          best = k;
        }
      }
      labels.at(r, c) = static_cast<std::uint16_t>(best);
    }
  }

  const double l_cls = ce_loss(pred.logits, labels);
  const double l_common = l1_common(pred.distances, target.distances);
  const double l_prob = bce_prob(center_scores_from_probs(pred.center),
                                 target.center);
  return total_loss(l_cls, l_common, l_prob, w);
}

}  // namespace casnet
