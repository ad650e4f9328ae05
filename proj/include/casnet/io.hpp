#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casnet/class_table.hpp"
#include "casnet/cluster.hpp"
#include "casnet/dense_map.hpp"
#include "casnet/metrics.hpp"
#include "casnet/panoptic.hpp"
#include "casnet/scene.hpp"
#include "casnet/targets.hpp"

namespace casnet {

enum class IoCode {
  kBadMagic,
  kBadHeader,
  kTruncated,
  kDtypeMismatch,
  kNotFound,
  kWriteFailed,
  kParse,
  kInconsistent,
};

class io_error : public std::runtime_error {
 public:
  io_error(IoCode code, const std::string& what, std::int64_t offset = -1)
      : std::runtime_error(what), code_(code), offset_(offset) {}
  IoCode code() const { return code_; }
  // byte offset of the problem for binary files, -1 when not applicable
  std::int64_t offset() const { return offset_; }

 private:
  IoCode code_;
  std::int64_t offset_;
};

// ---------------------------------------------------------------------------
// number formatting (locale independent)

inline std::string fmt_fixed(double v, int digits) {
  char buf[64];
  auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

inline std::string fmt4(double v) { return fmt_fixed(v, 4); }

inline std::string fmt_full(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw io_error(IoCode::kParse, where + ": bad number '" + std::string(s) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view s, const std::string& where) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw io_error(IoCode::kParse, where + ": bad integer '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& where) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw io_error(IoCode::kParse, where + ": bad integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dense map binary format
//
//   offset  size  field
//   0       4     magic "CASM"
//   4       2     version (u16, = 1)
//   6       1     dtype (1 = u16 labels, 2 = f32)
//   7       2     channels (u16)
//   9       4     height (u32)
//   13      4     width (u32)
//   17      2     stride (u16)
//   19      ...   payload, channel-major then row-major, little-endian

inline constexpr std::uint16_t kMapFormatVersion = 1;
inline constexpr std::size_t kMapHeaderSize = 19;

namespace detail {

inline void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>(v >> 8));
}

inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint16_t get_u16(const std::string& b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

inline std::uint32_t get_u32(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + i])) << (8 * i);
  return v;
}

template <typename T>
std::uint8_t dtype_code();
template <>
inline std::uint8_t dtype_code<std::uint16_t>() { return 1; }
template <>
inline std::uint8_t dtype_code<float>() { return 2; }

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io_error(IoCode::kNotFound, path.string() + ": cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path,
                             const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw io_error(IoCode::kWriteFailed, path.string() + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error(IoCode::kWriteFailed, path.string() + ": write failed");
}

}  // namespace detail

template <typename T>
void write_map(const DenseMap<T>& m, const std::filesystem::path& path) {
  std::string bytes;
  bytes.reserve(kMapHeaderSize + m.size() * sizeof(T));
  bytes += "CASM";
  detail::put_u16(bytes, kMapFormatVersion);
  bytes.push_back(static_cast<char>(detail::dtype_code<T>()));
  detail::put_u16(bytes, static_cast<std::uint16_t>(m.channels));
  detail::put_u32(bytes, static_cast<std::uint32_t>(m.height));
  detail::put_u32(bytes, static_cast<std::uint32_t>(m.width));
  detail::put_u16(bytes, static_cast<std::uint16_t>(m.stride));
  for (const T& v : m.data) {
    if constexpr (std::is_same_v<T, std::uint16_t>) {
      detail::put_u16(bytes, v);
    } else {
      detail::put_u32(bytes, std::bit_cast<std::uint32_t>(v));
    }
  }
  detail::write_file_bytes(path, bytes);
}

template <typename T>
DenseMap<T> read_map(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path);
  const std::string& name = path.string();
  if (bytes.size() < kMapHeaderSize) {
    if (bytes.size() < 4 || bytes.compare(0, 4, "CASM") != 0)
      throw io_error(IoCode::kBadMagic, name + ": bad magic at byte 0", 0);
    throw io_error(IoCode::kTruncated,
                   name + ": header truncated, expected " +
                       std::to_string(kMapHeaderSize) + " bytes, got " +
                       std::to_string(bytes.size()),
                   static_cast<std::int64_t>(bytes.size()));
  }
  if (bytes.compare(0, 4, "CASM") != 0)
    throw io_error(IoCode::kBadMagic, name + ": bad magic at byte 0", 0);
  const std::uint16_t version = detail::get_u16(bytes, 4);
  if (version != kMapFormatVersion)
    throw io_error(IoCode::kBadHeader,
                   name + ": unsupported version " + std::to_string(version) +
                       " at byte 4",
                   4);
  const std::uint8_t dtype = static_cast<std::uint8_t>(bytes[6]);
  if (dtype != 1 && dtype != 2)
    throw io_error(IoCode::kBadHeader,
                   name + ": unknown dtype " + std::to_string(dtype) + " at byte 6",
                   6);
  if (dtype != detail::dtype_code<T>())
    throw io_error(IoCode::kDtypeMismatch,
                   name + ": dtype " + std::to_string(dtype) +
                       " does not match the requested map type",
                   6);

  DenseMap<T> m;
  m.channels = detail::get_u16(bytes, 7);
  m.height = static_cast<int>(detail::get_u32(bytes, 9));
  m.width = static_cast<int>(detail::get_u32(bytes, 13));
  m.stride = detail::get_u16(bytes, 17);
  if (m.channels < 1 || m.height < 0 || m.width < 0 || m.stride < 1)
    throw io_error(IoCode::kBadHeader, name + ": nonsensical header fields", 7);

  const std::size_t n = static_cast<std::size_t>(m.channels) *
                        static_cast<std::size_t>(m.height) *
                        static_cast<std::size_t>(m.width);
  const std::size_t expected = kMapHeaderSize + n * sizeof(T);
  if (bytes.size() != expected)
    throw io_error(IoCode::kTruncated,
                   name + ": payload length mismatch, expected " +
                       std::to_string(expected) + " bytes, got " +
                       std::to_string(bytes.size()),
                   static_cast<std::int64_t>(
                       std::min(bytes.size(), expected)));

  m.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = kMapHeaderSize + i * sizeof(T);
    if constexpr (std::is_same_v<T, std::uint16_t>) {
      m.data[i] = detail::get_u16(bytes, at);
    } else {
      m.data[i] = std::bit_cast<float>(detail::get_u32(bytes, at));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// plain-text key=value manifests

namespace detail {

using KvLines = std::vector<std::pair<std::string, std::string>>;

inline KvLines read_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw io_error(IoCode::kNotFound, path.string() + ": cannot open for reading");
  KvLines lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error(IoCode::kParse, path.string() + ":" + std::to_string(lineno) +
                                         ": expected key=value");
    lines.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return lines;
}

inline std::string class_table_lines(const ClassTable& table) {
  std::string out;
  for (const ClassDef& d : table.classes) {
    if (d.id == 0) continue;  // void is implicit
    out += "class=" + std::to_string(d.id) + "," + d.name + "," +
           kind_name(d.kind) + "\n";
  }
  return out;
}

inline ClassTable class_table_from_kv(const KvLines& kv, const std::string& where) {
  ClassTable table;
  table.classes.push_back(ClassDef{0, "void", ClassKind::kStuff});
  for (const auto& [k, v] : kv) {
    if (k != "class") continue;
    const auto parts = split(v, ',');
    if (parts.size() != 3)
      throw io_error(IoCode::kParse, where + ": class line needs id,name,kind");
    ClassDef d;
    d.id = static_cast<std::uint16_t>(parse_uint(parts[0], where));
    d.name = std::string(parts[1]);
    if (parts[2] == "thing") {
      d.kind = ClassKind::kThing;
    } else if (parts[2] == "stuff") {
      d.kind = ClassKind::kStuff;
    } else {
      throw io_error(IoCode::kParse, where + ": class kind must be thing or stuff");
    }
    table.classes.push_back(d);
  }
  try {
    table.validate();
  } catch (const std::exception& e) {
    throw io_error(IoCode::kInconsistent, where + ": " + e.what());
  }
  return table;
}

inline std::string require_kv(const KvLines& kv, const std::string& key,
                              const std::string& where) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  throw io_error(IoCode::kParse, where + ": missing key '" + key + "'");
}

}  // namespace detail

struct LoadedScene {
  InstanceScene scene;
  std::uint64_t rng_seed = 0;
};

// Writes <stem>.semantic.casm and <stem>.instance.casm next to the manifest.
inline void write_scene(const InstanceScene& s, std::uint64_t rng_seed,
                        const std::filesystem::path& manifest_path) {
  const std::filesystem::path dir = manifest_path.parent_path();
  const std::string stem = manifest_path.stem().string();
  const std::string sem_name = stem + ".semantic.casm";
  const std::string inst_name = stem + ".instance.casm";
  write_map(s.semantic_map, dir / sem_name);
  write_map(s.instance_map, dir / inst_name);

  std::string text;
  text += "height=" + std::to_string(s.height) + "\n";
  text += "width=" + std::to_string(s.width) + "\n";
  text += "rng_seed=" + std::to_string(rng_seed) + "\n";
  text += detail::class_table_lines(s.classes);
  text += "semantic_map=" + sem_name + "\n";
  text += "instance_map=" + inst_name + "\n";
  detail::write_file_bytes(manifest_path, text);
}

inline LoadedScene read_scene(const std::filesystem::path& manifest_path) {
  const std::string where = manifest_path.string();
  const auto kv = detail::read_kv_file(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();

  LoadedScene out;
  out.scene.height =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "height", where), where));
  out.scene.width =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "width", where), where));
  out.rng_seed = detail::parse_uint(detail::require_kv(kv, "rng_seed", where), where);
  out.scene.classes = detail::class_table_from_kv(kv, where);
  out.scene.semantic_map =
      read_map<std::uint16_t>(dir / detail::require_kv(kv, "semantic_map", where));
  out.scene.instance_map =
      read_map<std::uint16_t>(dir / detail::require_kv(kv, "instance_map", where));

  if (out.scene.semantic_map.height != out.scene.height ||
      out.scene.semantic_map.width != out.scene.width ||
      out.scene.instance_map.height != out.scene.height ||
      out.scene.instance_map.width != out.scene.width)
    throw io_error(IoCode::kInconsistent,
                   where + ": referenced maps disagree with the declared size");

  try {
    out.scene.instances =
        detail::records_from_maps(out.scene.semantic_map, out.scene.instance_map);
    const auto violations = validate_scene(out.scene);
    if (!violations.empty())
      throw std::runtime_error(violations.front());
  } catch (const io_error&) {
    throw;
  } catch (const std::exception& e) {
    throw io_error(IoCode::kInconsistent, where + ": " + e.what());
  }
  return out;
}

inline void write_bundle(const PredictionBundle& b,
                         const std::filesystem::path& manifest_path) {
  const std::filesystem::path dir = manifest_path.parent_path();
  const std::string stem = manifest_path.stem().string();
  const std::string logits_name = stem + ".logits.casm";
  const std::string dist_name = stem + ".distances.casm";
  const std::string valid_name = stem + ".valid.casm";
  const std::string center_name = stem + ".center.casm";
  write_map(b.logits, dir / logits_name);
  write_map(b.distances.values, dir / dist_name);
  write_map(b.distances.valid, dir / valid_name);
  write_map(b.center, dir / center_name);

  std::string text;
  text += "height=" + std::to_string(b.height()) + "\n";
  text += "width=" + std::to_string(b.width()) + "\n";
  text += "stride=" + std::to_string(b.stride()) + "\n";
  text += detail::class_table_lines(b.classes);
  text += "logits=" + logits_name + "\n";
  text += "distances=" + dist_name + "\n";
  text += "valid=" + valid_name + "\n";
  text += "center=" + center_name + "\n";
  detail::write_file_bytes(manifest_path, text);
}

inline PredictionBundle read_bundle(const std::filesystem::path& manifest_path) {
  const std::string where = manifest_path.string();
  const auto kv = detail::read_kv_file(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();

  PredictionBundle b;
  b.classes = detail::class_table_from_kv(kv, where);
  b.logits = read_map<float>(dir / detail::require_kv(kv, "logits", where));
  b.distances.values =
      read_map<float>(dir / detail::require_kv(kv, "distances", where));
  b.distances.valid =
      read_map<std::uint16_t>(dir / detail::require_kv(kv, "valid", where));
  b.center = read_map<float>(dir / detail::require_kv(kv, "center", where));

  const int h =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "height", where), where));
  const int w =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "width", where), where));
  const int stride =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "stride", where), where));
  if (b.logits.height != h || b.logits.width != w || b.logits.stride != stride)
    throw io_error(IoCode::kInconsistent,
                   where + ": referenced maps disagree with the declared size");
  try {
    check_bundle(b);
  } catch (const std::exception& e) {
    throw io_error(IoCode::kInconsistent, where + ": " + e.what());
  }
  return b;
}

struct LoadedPanoptic {
  PanopticMap map;
  ClassTable classes;
};

inline void write_panoptic(const PanopticMap& p, const ClassTable& table,
                           const std::filesystem::path& manifest_path) {
  const std::filesystem::path dir = manifest_path.parent_path();
  const std::string stem = manifest_path.stem().string();
  const std::string class_name = stem + ".class.casm";
  const std::string inst_name = stem + ".instance.casm";
  write_map(p.class_map, dir / class_name);
  write_map(p.instance_map, dir / inst_name);

  std::string text;
  text += "height=" + std::to_string(p.height()) + "\n";
  text += "width=" + std::to_string(p.width()) + "\n";
  text += "stride=" + std::to_string(p.stride()) + "\n";
  text += detail::class_table_lines(table);
  text += "class_map=" + class_name + "\n";
  text += "instance_map=" + inst_name + "\n";
  detail::write_file_bytes(manifest_path, text);
}

inline LoadedPanoptic read_panoptic(const std::filesystem::path& manifest_path) {
  const std::string where = manifest_path.string();
  const auto kv = detail::read_kv_file(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();

  LoadedPanoptic out;
  out.classes = detail::class_table_from_kv(kv, where);
  out.map.class_map =
      read_map<std::uint16_t>(dir / detail::require_kv(kv, "class_map", where));
  out.map.instance_map =
      read_map<std::uint16_t>(dir / detail::require_kv(kv, "instance_map", where));
  const int h =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "height", where), where));
  const int w =
      static_cast<int>(detail::parse_int(detail::require_kv(kv, "width", where), where));
  if (out.map.class_map.height != h || out.map.class_map.width != w)
    throw io_error(IoCode::kInconsistent,
                   where + ": referenced maps disagree with the declared size");
  rebuild_segments(out.map);
  const auto violations = validate_partition(out.map, out.classes);
  if (!violations.empty())
    throw io_error(IoCode::kInconsistent, where + ": " + violations.front());
  return out;
}

// One line per seed, in rank order (line k describes instance id k+1).
inline void write_seeds(const std::vector<Seed>& seeds,
                        const std::filesystem::path& path) {
  std::string text;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Seed& s = seeds[i];
    text += "seed=" + std::to_string(i + 1) + "," + std::to_string(s.class_id) +
            "," + std::to_string(s.anchor.row) + "," + std::to_string(s.anchor.col) +
            "," + fmt_full(s.score) + "," + fmt_full(s.box.left) + "," +
            fmt_full(s.box.top) + "," + fmt_full(s.box.right) + "," +
            fmt_full(s.box.bottom) + "," + std::to_string(s.supporter_count) +
            "," + fmt_full(s.calibrated_box.left) + "," +
            fmt_full(s.calibrated_box.top) + "," + fmt_full(s.calibrated_box.right) +
            "," + fmt_full(s.calibrated_box.bottom) + "\n";
  }
  detail::write_file_bytes(path, text);
}

inline std::vector<Seed> read_seeds(const std::filesystem::path& path) {
  const std::string where = path.string();
  const auto kv = detail::read_kv_file(path);
  std::vector<Seed> seeds;
  for (const auto& [k, v] : kv) {
    if (k != "seed")
      throw io_error(IoCode::kParse, where + ": unexpected key '" + k + "'");
    const auto p = detail::split(v, ',');
    if (p.size() != 14)
      throw io_error(IoCode::kParse, where + ": seed line needs 14 fields");
    const std::int64_t id = detail::parse_int(p[0], where);
    if (id != static_cast<std::int64_t>(seeds.size()) + 1)
      throw io_error(IoCode::kInconsistent, where + ": seed ids must be 1..k in order");
    Seed s;
    s.class_id = static_cast<std::uint16_t>(detail::parse_uint(p[1], where));
    s.anchor.row = static_cast<int>(detail::parse_int(p[2], where));
    s.anchor.col = static_cast<int>(detail::parse_int(p[3], where));
    s.score = detail::parse_double(p[4], where);
    s.box = Box{detail::parse_double(p[5], where), detail::parse_double(p[6], where),
                detail::parse_double(p[7], where), detail::parse_double(p[8], where)};
    s.supporter_count = detail::parse_int(p[9], where);
    s.calibrated_box =
        Box{detail::parse_double(p[10], where), detail::parse_double(p[11], where),
            detail::parse_double(p[12], where), detail::parse_double(p[13], where)};
    seeds.push_back(s);
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// reports

inline std::string pq_report_table(const PQReport& rep, const ClassTable& table) {
  std::string t;
  t += "class  name              kind   pq      sq      rq      tp    fp    fn\n";
  for (const PQClassStats& s : rep.per_class) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6u %-17s %-6s %s  %s  %s  %-5lld %-5lld %-5lld\n",
                  s.class_id,
                  s.class_id < table.classes.size()
                      ? table.classes[s.class_id].name.c_str()
                      : "?",
                  s.class_id < table.classes.size()
                      ? kind_name(table.classes[s.class_id].kind)
                      : "?",
                  fmt4(s.pq).c_str(), fmt4(s.sq).c_str(), fmt4(s.rq).c_str(),
                  static_cast<long long>(s.tp), static_cast<long long>(s.fp),
                  static_cast<long long>(s.fn));
    t += line;
  }
  auto agg = [&](const char* name, const PQAggregate& a) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6s pq=%s sq=%s rq=%s n=%lld\n", name,
                  fmt4(a.pq).c_str(), fmt4(a.sq).c_str(), fmt4(a.rq).c_str(),
                  static_cast<long long>(a.n_classes));
    t += line;
  };
  agg("all", rep.all);
  agg("things", rep.things);
  agg("stuff", rep.stuff);
  return t;
}

inline std::string pq_report_kv(const PQReport& rep) {
  std::string t;
  auto agg = [&](const char* name, const PQAggregate& a) {
    t += std::string("pq.") + name + "=" + fmt4(a.pq) + "\n";
    t += std::string("sq.") + name + "=" + fmt4(a.sq) + "\n";
    t += std::string("rq.") + name + "=" + fmt4(a.rq) + "\n";
    t += std::string("n.") + name + "=" + std::to_string(a.n_classes) + "\n";
  };
  agg("all", rep.all);
  agg("things", rep.things);
  agg("stuff", rep.stuff);
  for (const PQClassStats& s : rep.per_class) {
    const std::string p = "class." + std::to_string(s.class_id) + ".";
    t += p + "pq=" + fmt4(s.pq) + "\n";
    t += p + "sq=" + fmt4(s.sq) + "\n";
    t += p + "rq=" + fmt4(s.rq) + "\n";
    t += p + "tp=" + std::to_string(s.tp) + "\n";
    t += p + "fp=" + std::to_string(s.fp) + "\n";
    t += p + "fn=" + std::to_string(s.fn) + "\n";
  }
  return t;
}

inline std::string ap_report_table(const APReport& rep, const ClassTable& table) {
  std::string t;
  t += "class  name              ap      ap50    n_gt\n";
  for (const APClassStats& s : rep.per_class) {
    char line[160];
    std::snprintf(line, sizeof line, "%-6u %-17s %s  %s  %lld\n", s.class_id,
                  s.class_id < table.classes.size()
                      ? table.classes[s.class_id].name.c_str()
                      : "?",
                  fmt4(s.ap).c_str(), fmt4(s.ap50).c_str(),
                  static_cast<long long>(s.n_gt));
    t += line;
  }
  char line[160];
  std::snprintf(line, sizeof line, "mAP=%s mAP50=%s n=%lld\n", fmt4(rep.map).c_str(),
                fmt4(rep.map50).c_str(), static_cast<long long>(rep.n_classes));
  t += line;
  return t;
}

inline std::string ap_report_kv(const APReport& rep) {
  std::string t;
  t += "map=" + fmt4(rep.map) + "\n";
  t += "map50=" + fmt4(rep.map50) + "\n";
  t += "n_classes=" + std::to_string(rep.n_classes) + "\n";
  for (const APClassStats& s : rep.per_class) {
    const std::string p = "class." + std::to_string(s.class_id) + ".";
    t += p + "ap=" + fmt4(s.ap) + "\n";
    t += p + "ap50=" + fmt4(s.ap50) + "\n";
    t += p + "n_gt=" + std::to_string(s.n_gt) + "\n";
  }
  return t;
}

inline void write_text(const std::string& text, const std::filesystem::path& path) {
  detail::write_file_bytes(path, text);
}

}  // namespace casnet
