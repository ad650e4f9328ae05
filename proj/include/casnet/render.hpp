#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "casnet/class_table.hpp"
#include "casnet/io.hpp"
#include "casnet/panoptic.hpp"
#include "casnet/rng.hpp"

namespace casnet {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

namespace detail {

inline Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  const int sector = static_cast<int>(h / 60.0) % 6;
  switch (sector) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [&](double u) {
    return static_cast<std::uint8_t>(std::lround((u + m) * 255.0));
  };
  return Rgb{to8(r), to8(g), to8(b)};
}

}  // namespace detail

// Deterministic per-(class, instance) palette: ids hash to a hue, things are
// saturated, stuff muted, void dark gray.
inline Rgb panoptic_color(std::uint16_t class_id, std::uint16_t instance_id,
                          const ClassTable& table) {
  if (class_id == 0) return Rgb{60, 60, 60};
  const std::uint64_t key =
      (static_cast<std::uint64_t>(class_id) << 16) | instance_id;
  const double hue = static_cast<double>(mix64(key) % 3600) / 10.0;
  if (table.is_thing(class_id)) return detail::hsv_to_rgb(hue, 0.85, 0.95);
  return detail::hsv_to_rgb(hue, 0.35, 0.80);
}

inline void render_panoptic(const PanopticMap& p, const ClassTable& table,
                            const std::filesystem::path& path) {
  std::string bytes;
  bytes += "P6\n" + std::to_string(p.width()) + " " + std::to_string(p.height()) +
           "\n255\n";
  bytes.reserve(bytes.size() + static_cast<std::size_t>(p.height()) *
                                   static_cast<std::size_t>(p.width()) * 3);
  for (int r = 0; r < p.height(); ++r) {
    for (int c = 0; c < p.width(); ++c) {
      const Rgb px = panoptic_color(p.class_map.at(r, c),
                                    p.instance_map.at(r, c), table);
      bytes.push_back(static_cast<char>(px.r));
      bytes.push_back(static_cast<char>(px.g));
      bytes.push_back(static_cast<char>(px.b));
    }
  }
  detail::write_file_bytes(path, bytes);
}

}  // namespace casnet
