#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "casnet/casnet.hpp"
#include "test_util.hpp"

namespace casnet {
namespace {

using testutil::TempDir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

TEST(MapIo, FloatRoundTripIsBitExact) {
  TempDir dir;
  FloatMap m(5, 7, 4, 2);
  float v = -3.25f;
  for (float& x : m.data) {
    x = v;
    v = v * -1.7f + 0.125f;
  }
  write_map(m, dir.file("m.casm"));
  const FloatMap back = read_map<float>(dir.file("m.casm"));
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.stride, 2);
  EXPECT_EQ(back.channels, 4);
}

TEST(MapIo, LabelRoundTripIsBitExact) {
  TempDir dir;
  LabelMap m(3, 9);
  std::uint16_t v = 1;
  for (std::uint16_t& x : m.data) x = v = static_cast<std::uint16_t>(v * 31 + 7);
  write_map(m, dir.file("m.casm"));
  EXPECT_EQ(read_map<std::uint16_t>(dir.file("m.casm")), m);
}

TEST(MapIo, BadMagicIsRejectedAtByteZero) {
  TempDir dir;
  detail::write_file_bytes(dir.file("bad.casm"),
                           std::string("NOPE") + std::string(32, '\0'));
  try {
    read_map<std::uint16_t>(dir.file("bad.casm"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kBadMagic);
    EXPECT_EQ(e.offset(), 0);
    EXPECT_NE(std::string(e.what()).find("bad magic at byte 0"),
              std::string::npos);
  }
}

TEST(MapIo, TruncationReportsExpectedAndActual) {
  TempDir dir;
  detail::write_file_bytes(dir.file("short.casm"), "CASM\x01");
  try {
    read_map<std::uint16_t>(dir.file("short.casm"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kTruncated);
    const std::string what = e.what();
    EXPECT_NE(what.find("expected 19"), std::string::npos);
    EXPECT_NE(what.find("got 5"), std::string::npos);
  }

  LabelMap m(4, 4);
  write_map(m, dir.file("chopped.casm"));
  std::string bytes = slurp(dir.file("chopped.casm"));
  bytes.resize(bytes.size() - 3);
  detail::write_file_bytes(dir.file("chopped.casm"), bytes);
  try {
    read_map<std::uint16_t>(dir.file("chopped.casm"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kTruncated);
  }
}

TEST(MapIo, DtypeMismatchIsRefused) {
  TempDir dir;
  write_map(FloatMap(2, 2), dir.file("f.casm"));
  try {
    read_map<std::uint16_t>(dir.file("f.casm"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kDtypeMismatch);
    EXPECT_EQ(e.offset(), 6);
  }
}

TEST(MapIo, UnsupportedVersionIsRefused) {
  TempDir dir;
  write_map(LabelMap(2, 2), dir.file("v.casm"));
  std::string bytes = slurp(dir.file("v.casm"));
  bytes[4] = 9;
  detail::write_file_bytes(dir.file("v.casm"), bytes);
  try {
    read_map<std::uint16_t>(dir.file("v.casm"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kBadHeader);
    EXPECT_NE(std::string(e.what()).find("unsupported version 9"),
              std::string::npos);
  }
}

TEST(MapIo, MissingFileIsNotFound) {
  try {
    read_map<float>("/nonexistent/nowhere.casm");
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kNotFound);
  }
}

TEST(SceneIo, ManifestRoundTrip) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 61;
  const InstanceScene s = generate_scene(cfg);
  write_scene(s, 61, dir.file("scene.txt"));
  const LoadedScene back = read_scene(dir.file("scene.txt"));
  EXPECT_EQ(back.scene, s);
  EXPECT_EQ(back.rng_seed, 61u);
}

TEST(SceneIo, DimensionDisagreementIsInconsistent) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 62;
  const InstanceScene s = generate_scene(cfg);
  write_scene(s, 62, dir.file("scene.txt"));
  std::string text = slurp(dir.file("scene.txt"));
  const auto pos = text.find("height=128");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 10, "height=256");
  detail::write_file_bytes(dir.file("scene.txt"), text);
  try {
    read_scene(dir.file("scene.txt"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kInconsistent);
  }
}

TEST(SceneIo, MissingKeyIsAParseError) {
  TempDir dir;
  detail::write_file_bytes(dir.file("scene.txt"), "height=4\nwidth=4\n");
  try {
    read_scene(dir.file("scene.txt"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kParse);
  }
}

TEST(SceneIo, MalformedLineIsAParseError) {
  TempDir dir;
  detail::write_file_bytes(dir.file("scene.txt"), "just some words\n");
  try {
    read_scene(dir.file("scene.txt"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kParse);
  }
}

TEST(BundleIo, RoundTripAtStrideTwo) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 63;
  const InstanceScene s = generate_scene(cfg);
  const PredictionBundle t = make_targets(s, 2, 0.2);
  write_bundle(t, dir.file("bundle.txt"));
  EXPECT_EQ(read_bundle(dir.file("bundle.txt")), t);
}

TEST(PanopticIo, RoundTripPreservesMapAndClasses) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 64;
  const InstanceScene s = generate_scene(cfg);
  const ClusterResult res = run_pipeline(make_targets(s, 1, 0.2));
  write_panoptic(res.panoptic, s.classes, dir.file("pano.txt"));
  const LoadedPanoptic back = read_panoptic(dir.file("pano.txt"));
  EXPECT_EQ(back.map, res.panoptic);
  EXPECT_EQ(back.classes, s.classes);
}

TEST(SeedIo, RoundTripKeepsExactValues) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 65;
  const InstanceScene s = generate_scene(cfg);
  NoiseConfig noise;
  noise.distance_sigma = 1.0;
  noise.rng_seed = 5;
  const ClusterResult res =
      run_pipeline(corrupt(make_targets(s, 1, 0.2), noise));
  ASSERT_FALSE(res.seeds.empty());
  write_seeds(res.seeds, dir.file("seeds.txt"));
  const std::vector<Seed> back = read_seeds(dir.file("seeds.txt"));
  ASSERT_EQ(back.size(), res.seeds.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].class_id, res.seeds[i].class_id);
    EXPECT_EQ(back[i].anchor, res.seeds[i].anchor);
    EXPECT_EQ(back[i].box, res.seeds[i].box);
    EXPECT_EQ(back[i].score, res.seeds[i].score);
    EXPECT_EQ(back[i].supporter_count, res.seeds[i].supporter_count);
    EXPECT_EQ(back[i].calibrated_box, res.seeds[i].calibrated_box);
  }
}

TEST(SeedIo, IdsMustBeSequentialFromOne) {
  TempDir dir;
  detail::write_file_bytes(
      dir.file("seeds.txt"),
      "seed=2,1,0,0,0.9,0,0,4,4,16,0,0,4,4\n");
  try {
    read_seeds(dir.file("seeds.txt"));
    FAIL() << "expected io_error";
  } catch (const io_error& e) {
    EXPECT_EQ(e.code(), IoCode::kInconsistent);
  }
}

TEST(Formatting, FixedAndFullHelpers) {
  EXPECT_EQ(fmt4(0.6), "0.6000");
  EXPECT_EQ(fmt4(1.0), "1.0000");
  EXPECT_EQ(fmt4(0.82517), "0.8252");
  EXPECT_EQ(fmt_fixed(2.5, 1), "2.5");
  const double v = 0.1234567890123456789;
  EXPECT_EQ(detail::parse_double(fmt_full(v), "t"), v);
}

TEST(Reports, PqKvKeysParseBack) {
  const ClassTable table = default_class_table(2, 1);
  SceneGenConfig cfg;
  cfg.rng_seed = 66;
  const InstanceScene s = generate_scene(cfg);
  const PanopticMap gt = to_panoptic(s);
  const PQReport rep = panoptic_quality(gt, gt, s.classes);

  TempDir dir;
  write_text(pq_report_kv(rep), dir.file("pq.kv"));
  const auto kv = detail::read_kv_file(dir.file("pq.kv"));
  auto value_of = [&](const std::string& key) -> std::string {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    return "<missing>";
  };
  EXPECT_EQ(detail::parse_double(value_of("pq.all"), "t"), rep.all.pq);
  EXPECT_EQ(detail::parse_double(value_of("rq.things"), "t"), rep.things.rq);
  EXPECT_EQ(detail::parse_int(value_of("n.stuff"), "t"), rep.stuff.n_classes);

  const std::string table_text = pq_report_table(rep, s.classes);
  EXPECT_NE(table_text.find("pq="), std::string::npos);
  EXPECT_NE(table_text.find("class"), std::string::npos);
}

TEST(Reports, ApKvKeysParseBack) {
  const ClassTable table = default_class_table(2, 1);
  PanopticMap gt;
  gt.class_map = LabelMap(6, 6, 1, 1, std::uint16_t{3});
  gt.instance_map = LabelMap(6, 6);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      gt.class_map.at(r, c) = 1;
      gt.instance_map.at(r, c) = 1;
    }
  rebuild_segments(gt);
  const APReport rep = average_precision(gt, {{1, 0.7}}, gt, table);

  TempDir dir;
  write_text(ap_report_kv(rep), dir.file("ap.kv"));
  const auto kv = detail::read_kv_file(dir.file("ap.kv"));
  bool saw_map = false;
  for (const auto& [k, v] : kv)
    if (k == "map") {
      EXPECT_EQ(detail::parse_double(v, "t"), 1.0);
      saw_map = true;
    }
  EXPECT_TRUE(saw_map);
}

TEST(Render, DeterministicP6WithDistinctInstanceColors) {
  TempDir dir;
  SceneGenConfig cfg;
  cfg.rng_seed = 67;
  cfg.n_instances_min = 2;
  const InstanceScene s = generate_scene(cfg);
  const PanopticMap p = to_panoptic(s);
  render_panoptic(p, s.classes, dir.file("a.ppm"));
  render_panoptic(p, s.classes, dir.file("b.ppm"));
  const std::string a = slurp(dir.file("a.ppm"));
  EXPECT_EQ(a, slurp(dir.file("b.ppm")));

  const std::string header = "P6\n128 128\n255\n";
  ASSERT_EQ(a.compare(0, header.size(), header), 0);
  EXPECT_EQ(a.size(), header.size() + 3u * 128u * 128u);

  const Rgb c1 = panoptic_color(s.instances[0].class_id, 1, s.classes);
  const Rgb c2 = panoptic_color(s.instances[1].class_id, 2, s.classes);
  EXPECT_FALSE(c1.r == c2.r && c1.g == c2.g && c1.b == c2.b);
}

TEST(Render, VoidPixelsGetTheFixedGray) {
  const ClassTable table = default_class_table(1, 1);
  const Rgb v = panoptic_color(0, 0, table);
  EXPECT_EQ(v.r, 60);
  EXPECT_EQ(v.g, 60);
  EXPECT_EQ(v.b, 60);
}

}  // namespace
}  // namespace casnet
