#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "casnet/rng.hpp"
#include "casnet/targets.hpp"

namespace casnet {

// Desk-scale surrogate for network prediction error.
struct NoiseConfig {
  double label_flip_rate = 0.0;   // per pixel
  double distance_sigma = 0.0;    // in pixels at the working stride
  double center_dropout = 0.0;    // per positive center cell
  double center_false_rate = 0.0; // per negative center cell
  std::uint64_t rng_seed = 0;
};

inline void validate_noise(const NoiseConfig& n) {
  auto rate = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!rate(n.label_flip_rate))
    throw std::invalid_argument("noise: label_flip_rate must be in [0,1]");
  if (n.distance_sigma < 0.0)
    throw std::invalid_argument("noise: distance_sigma must be >= 0");
  if (!rate(n.center_dropout))
    throw std::invalid_argument("noise: center_dropout must be in [0,1]");
  if (!rate(n.center_false_rate))
    throw std::invalid_argument("noise: center_false_rate must be in [0,1]");
}

// Applies the configured corruption to a copy of the bundle. Every decision
// draws from a counter keyed by the cell's row-major index, so the output is
// reproducible regardless of evaluation order, and a stage at rate zero
// leaves its map bit-identical.
inline PredictionBundle corrupt(const PredictionBundle& bundle,
                                const NoiseConfig& n) {
  check_bundle(bundle);
  validate_noise(n);

  PredictionBundle out = bundle;
  const int h = out.height(), w = out.width();
  const int n_classes = out.logits.channels;
  const CounterRng root(n.rng_seed);
  const CounterRng flip_rng = root.split(0);
  const CounterRng dist_rng = root.split(1);
  const CounterRng drop_rng = root.split(2);
  const CounterRng false_rng = root.split(3);

  if (n.label_flip_rate > 0.0 && n_classes > 1) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::uint64_t idx = static_cast<std::uint64_t>(r) * w + c;
        if (flip_rng.u01(2 * idx) >= n.label_flip_rate) continue;
        int label = 0;
        float hi = out.logits.at(0, r, c);
        for (int k = 1; k < n_classes; ++k) {
          if (out.logits.at(k, r, c) > hi) {
            hi = out.logits.at(k, r, c);
            label = k;
          }
        }
        std::int64_t pick =
            flip_rng.uniform_int(2 * idx + 1, 0, n_classes - 2);
        if (pick >= label) pick += 1;
        out.logits.at(static_cast<int>(pick), r, c) = hi + 1.0f;
      }
    }
  }

  if (n.distance_sigma > 0.0) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (!out.distances.valid.at(r, c)) continue;
        const std::uint64_t idx = static_cast<std::uint64_t>(r) * w + c;
        for (int ch = 0; ch < 4; ++ch) {
          float& v = out.distances.values.at(ch, r, c);
          const double noisy =
              v + n.distance_sigma * dist_rng.gaussian(4 * idx + ch);
          v = static_cast<float>(std::max(0.0, noisy));
        }
      }
    }
  }

  if (n.center_dropout > 0.0) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        float& v = out.center.at(r, c);
        if (v < 0.5f) continue;
        const std::uint64_t idx = static_cast<std::uint64_t>(r) * w + c;
        if (drop_rng.u01(idx) < n.center_dropout) v = 0.0f;
      }
    }
  }

  if (n.center_false_rate > 0.0) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        float& v = out.center.at(r, c);
        if (v >= 0.5f) continue;
        const std::uint64_t idx = static_cast<std::uint64_t>(r) * w + c;
        if (false_rng.u01(2 * idx) < n.center_false_rate)
          v = static_cast<float>(0.5 + 0.5 * false_rng.u01(2 * idx + 1));
      }
    }
  }

  return out;
}

}  // namespace casnet
