#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "casnet/cluster.hpp"
#include "casnet/corrupt.hpp"
#include "casnet/scene.hpp"
#include "casnet/targets.hpp"

namespace casnet {
namespace {

PredictionBundle blank_bundle(int h, int w, const ClassTable& table,
                              std::uint16_t backdrop) {
  PredictionBundle b;
  b.classes = table;
  b.logits = FloatMap(h, w, static_cast<int>(table.size()));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) b.logits.at(backdrop, r, c) = 10.0f;
  b.distances = DistanceMaps{FloatMap(h, w, 4), LabelMap(h, w)};
  b.center = FloatMap(h, w, 1);
  return b;
}

void paint_thing_pixel(PredictionBundle& b, int r, int c, std::uint16_t cls,
                       const Box& box) {
  for (int ch = 0; ch < b.logits.channels; ++ch) b.logits.at(ch, r, c) = 0.0f;
  b.logits.at(cls, r, c) = 10.0f;
  b.distances.set(r, c, distances_to_box(PixelCoord{r, c}, box, 1));
  b.distances.valid.at(r, c) = 1;
}

void paint_thing_rect(PredictionBundle& b, const Box& box, std::uint16_t cls) {
  for (int r = static_cast<int>(box.top); r < static_cast<int>(box.bottom); ++r)
    for (int c = static_cast<int>(box.left); c < static_cast<int>(box.right);
         ++c)
      paint_thing_pixel(b, r, c, cls, box);
}

TEST(Argmax, PicksLowestClassOnTies) {
  FloatMap logits(1, 1, 3);
  LabelMap labels = argmax_semantics(logits);
  EXPECT_EQ(labels.at(0, 0), 0);

  logits.at(2, 0, 0) = 1.0f;
  EXPECT_EQ(argmax_semantics(logits).at(0, 0), 2);

  logits.at(1, 0, 0) = 1.0f;
  EXPECT_EQ(argmax_semantics(logits).at(0, 0), 1);
}

TEST(ExtractSeeds, IdealTargetsYieldOneSeedPerInstance) {
  SceneGenConfig cfg;
  cfg.rng_seed = 41;
  cfg.n_instances_max = 8;
  const InstanceScene s = generate_scene(cfg);
  const PredictionBundle t = make_targets(s, 1, 0.2);
  const LabelMap labels = argmax_semantics(t.logits);
  std::vector<Seed> seeds = extract_seeds(t, labels, ClusterConfig{});
  ASSERT_EQ(seeds.size(), s.instances.size());

  std::vector<const InstanceRecord*> by_id(64, nullptr);
  for (const InstanceRecord& rec : s.instances) by_id[rec.instance_id] = &rec;
  for (const Seed& seed : seeds) {
    const std::uint16_t id = s.instance_map.at(seed.anchor.row, seed.anchor.col);
    ASSERT_NE(id, 0);
    EXPECT_EQ(seed.class_id, by_id[id]->class_id);
    EXPECT_EQ(seed.box, by_id[id]->box);
  }
}

TEST(ExtractSeeds, NoCandidatesMeansNoSeeds) {
  const ClassTable table = default_class_table(1, 1);
  PredictionBundle b = blank_bundle(8, 8, table, 2);
  paint_thing_rect(b, Box{1, 1, 5, 5}, 1);
  const LabelMap labels = argmax_semantics(b.logits);
  EXPECT_TRUE(extract_seeds(b, labels, ClusterConfig{}).empty());
}

TEST(ExtractSeeds, CoincidentBoxesCollapseToHighestScore) {
  const ClassTable table = default_class_table(1, 1);
  PredictionBundle b = blank_bundle(8, 8, table, 2);
  const Box box{0, 0, 6, 6};
  paint_thing_pixel(b, 0, 0, 1, box);
  paint_thing_pixel(b, 0, 1, 1, box);
  b.center.at(0, 0, 0) = 0.9f;
  b.center.at(0, 0, 1) = 0.8f;
  const LabelMap labels = argmax_semantics(b.logits);
  const std::vector<Seed> seeds = extract_seeds(b, labels, ClusterConfig{});
  ASSERT_EQ(seeds.size(), 1u);
  EXPECT_EQ(seeds[0].anchor, (PixelCoord{0, 0}));
  EXPECT_FLOAT_EQ(seeds[0].score, 0.9f);
  EXPECT_EQ(seeds[0].box, box);
}

TEST(Cluster, SingleSeedCollectsItsRectangle) {
  const ClassTable table = default_class_table(1, 1);
  PredictionBundle b = blank_bundle(12, 12, table, 2);
  const Box box{3, 2, 10, 8};
  paint_thing_rect(b, box, 1);
  b.center.at(0, 5, 6) = 0.9f;

  const ClusterResult res = run_pipeline(b);
  ASSERT_EQ(res.seeds.size(), 1u);
  EXPECT_EQ(res.seeds[0].supporter_count, 42);
  EXPECT_EQ(res.seeds[0].calibrated_box, box);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < 12; ++c) {
      const bool inside = r >= 2 && r < 8 && c >= 3 && c < 10;
      EXPECT_EQ(res.panoptic.instance_map.at(r, c), inside ? 1 : 0);
      EXPECT_EQ(res.panoptic.class_map.at(r, c), inside ? 1 : 2);
    }
  EXPECT_TRUE(validate_partition(res.panoptic, table).empty());
}

TEST(Cluster, SideBySideCarsRecoverGroundTruthExactly) {
  InstanceScene s;
  s.height = 20;
  s.width = 32;
  s.classes = default_class_table(1, 1);
  s.semantic_map = LabelMap(20, 32, 1, 1, std::uint16_t{2});
  s.instance_map = LabelMap(20, 32);
  for (int r = 0; r < 20; ++r)
    for (int c = 0; c < 20; ++c) {
      s.semantic_map.at(r, c) = 1;
      s.instance_map.at(r, c) = 1;
    }
  for (int r = 0; r < 20; ++r)
    for (int c = 12; c < 32; ++c) {
      s.semantic_map.at(r, c) = 1;
      s.instance_map.at(r, c) = 2;
    }
  s.instances = {
      InstanceRecord{1, 1, Box{0, 0, 12, 20}, 240},
      InstanceRecord{2, 1, Box{12, 0, 32, 20}, 400},
  };
  ASSERT_TRUE(validate_scene(s).empty());

  const PredictionBundle t = make_targets(s, 1, 0.2);
  const ClusterResult res = run_pipeline(t);
  ASSERT_EQ(res.seeds.size(), 2u);
  EXPECT_EQ(res.seeds[0].supporter_count, 240);
  EXPECT_EQ(res.seeds[1].supporter_count, 400);
  EXPECT_EQ(res.seeds[0].calibrated_box, s.instances[0].box);
  EXPECT_EQ(res.seeds[1].calibrated_box, s.instances[1].box);
  EXPECT_EQ(res.panoptic.class_map.data, s.semantic_map.data);
  EXPECT_EQ(res.panoptic.instance_map.data, s.instance_map.data);
}

TEST(Cluster, TinyInstanceIsPrunedAndRenumbered) {
  InstanceScene s;
  s.height = 40;
  s.width = 40;
  s.classes = default_class_table(1, 1);
  s.semantic_map = LabelMap(40, 40, 1, 1, std::uint16_t{2});
  s.instance_map = LabelMap(40, 40);
  for (int c = 2; c < 7; ++c) {
    s.semantic_map.at(2, c) = 1;
    s.instance_map.at(2, c) = 1;
  }
  for (int r = 10; r < 30; ++r)
    for (int c = 10; c < 30; ++c) {
      s.semantic_map.at(r, c) = 1;
      s.instance_map.at(r, c) = 2;
    }
  s.instances = {
      InstanceRecord{1, 1, Box{2, 2, 7, 3}, 5},
      InstanceRecord{2, 1, Box{10, 10, 30, 30}, 400},
  };

  const PredictionBundle t = make_targets(s, 1, 0.2);
  ClusterConfig cfg;
  cfg.min_instance_pixels = 10;
  const ClusterResult res = run_pipeline(t, cfg);

  ASSERT_EQ(res.seeds.size(), 1u);
  EXPECT_EQ(res.seeds[0].supporter_count, 400);
  EXPECT_EQ(res.diagnostics.n_pruned, 1);
  EXPECT_EQ(res.diagnostics.n_orphan_pixels, 5);
  for (int c = 2; c < 7; ++c) {
    EXPECT_EQ(res.panoptic.class_map.at(2, c), 1);
    EXPECT_EQ(res.panoptic.instance_map.at(2, c), 0);
  }
  EXPECT_EQ(res.panoptic.instance_map.at(15, 15), 1);
}

TEST(Cluster, UnsupportedInjectedSeedIsDropped) {
  InstanceScene s;
  s.height = 40;
  s.width = 40;
  s.classes = default_class_table(1, 1);
  s.semantic_map = LabelMap(40, 40, 1, 1, std::uint16_t{2});
  s.instance_map = LabelMap(40, 40);
  for (int r = 10; r < 30; ++r)
    for (int c = 10; c < 30; ++c) {
      s.semantic_map.at(r, c) = 1;
      s.instance_map.at(r, c) = 1;
    }
  s.instances = {InstanceRecord{1, 1, Box{10, 10, 30, 30}, 400}};

  const PredictionBundle t = make_targets(s, 1, 0.2);
  const LabelMap labels = argmax_semantics(t.logits);
  ClusterConfig cfg;
  std::vector<Seed> seeds = extract_seeds(t, labels, cfg);
  ASSERT_EQ(seeds.size(), 1u);
  seeds.push_back(Seed{1, PixelCoord{35, 35}, Box{34, 34, 37, 37}, 0.99});

  PanopticMap things =
      assign_instances(labels, t.distances, seeds, cfg, t.classes);
  EXPECT_EQ(seeds[1].supporter_count, 0);
  const PanopticMap merged = prune_and_merge(std::move(things), seeds, labels, cfg);

  ASSERT_EQ(seeds.size(), 1u);
  EXPECT_EQ(seeds[0].supporter_count, 400);
  for (const Segment& seg : merged.segments) EXPECT_LE(seg.instance_id, 1);
}

TEST(Cluster, NarrowIouGapFallsBackToNearestCenter) {
  const ClassTable table = default_class_table(1, 1);
  const Box box_a{0, 0, 8, 8};
  const Box box_b{10, 0, 26, 8};

  auto build = [&]() {
    PredictionBundle b = blank_bundle(12, 30, table, 2);
    paint_thing_rect(b, box_a, 1);
    paint_thing_rect(b, box_b, 1);
    b.center.at(0, 3, 3) = 1.0f;
    b.center.at(0, 3, 16) = 1.0f;
    // probe pixel between the two: its own box overlaps A at 0.2 and B at
    // 5/21, a gap inside the default margin
    for (int ch = 0; ch < b.logits.channels; ++ch)
      b.logits.at(ch, 3, 9) = 0.0f;
    b.logits.at(1, 3, 9) = 10.0f;
    b.distances.set(3, 9, DistanceVector{4.0, 3.0, 5.0, 4.0});
    b.distances.valid.at(3, 9) = 1;
    return b;
  };

  ClusterConfig with_margin;
  const ClusterResult near_center = run_pipeline(build(), with_margin);
  ASSERT_EQ(near_center.seeds.size(), 2u);
  EXPECT_EQ(near_center.seeds[0].box, box_a);
  EXPECT_EQ(near_center.panoptic.instance_map.at(3, 9), 1);

  ClusterConfig no_margin;
  no_margin.center_tiebreak_margin = 0.0;
  const ClusterResult by_iou = run_pipeline(build(), no_margin);
  EXPECT_EQ(by_iou.panoptic.instance_map.at(3, 9), 2);
}

TEST(Cluster, SeedlessClassKeepsPixelsAtInstanceZero) {
  const ClassTable table = default_class_table(2, 1);
  PredictionBundle b = blank_bundle(10, 10, table, 3);
  paint_thing_rect(b, Box{1, 1, 5, 5}, 1);
  paint_thing_rect(b, Box{6, 6, 9, 9}, 2);
  b.center.at(0, 7, 7) = 0.9f;  // only the class-2 rect gets a seed

  const ClusterResult res = run_pipeline(b);
  ASSERT_EQ(res.seeds.size(), 1u);
  EXPECT_EQ(res.seeds[0].class_id, 2);
  EXPECT_EQ(res.panoptic.instance_map.at(2, 2), 0);
  EXPECT_EQ(res.panoptic.class_map.at(2, 2), 1);
  EXPECT_EQ(res.diagnostics.n_orphan_pixels, 16);
  EXPECT_TRUE(validate_partition(res.panoptic, table).empty());
}

TEST(Cluster, PartitionInvariantsSurviveNoise) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SceneGenConfig cfg;
    cfg.rng_seed = seed;
    const InstanceScene s = generate_scene(cfg);
    NoiseConfig noise;
    noise.label_flip_rate = 0.02;
    noise.distance_sigma = 2.0;
    noise.center_dropout = 0.1;
    noise.center_false_rate = 0.001;
    noise.rng_seed = seed + 1;
    const PredictionBundle noisy = corrupt(make_targets(s, 1, 0.2), noise);
    const ClusterResult res = run_pipeline(noisy);
    EXPECT_TRUE(validate_partition(res.panoptic, s.classes).empty())
        << "seed " << seed;
    for (std::size_t i = 0; i < res.seeds.size(); ++i)
      EXPECT_GE(res.seeds[i].supporter_count, 1) << "seed " << seed;
  }
}

TEST(Cluster, ConfigValidation) {
  ClusterConfig bad;
  bad.seed_threshold = 0.0;
  EXPECT_THROW(validate_config(bad), std::invalid_argument);
  bad = ClusterConfig{};
  bad.nms_iou = 1.0;
  EXPECT_THROW(validate_config(bad), std::invalid_argument);
  bad = ClusterConfig{};
  bad.center_tiebreak_margin = -0.1;
  EXPECT_THROW(validate_config(bad), std::invalid_argument);
  bad = ClusterConfig{};
  bad.min_instance_pixels = -1;
  EXPECT_THROW(validate_config(bad), std::invalid_argument);
}

}  // namespace
}  // namespace casnet
