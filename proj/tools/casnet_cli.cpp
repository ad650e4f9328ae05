#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casnet/casnet.hpp"

namespace fs = std::filesystem;
using namespace casnet;

namespace {

std::vector<ShapeKind> parse_shapes(const std::string& csv) {
  std::vector<ShapeKind> shapes;
  for (std::string_view part : detail::split(csv, ',')) {
    if (part == "rectangle" || part == "rect") {
      shapes.push_back(ShapeKind::kRectangle);
    } else if (part == "ellipse") {
      shapes.push_back(ShapeKind::kEllipse);
    } else {
      throw CLI::ValidationError("--shapes",
                                 "unknown shape '" + std::string(part) + "'");
    }
  }
  return shapes;
}

struct GenFlags {
  SceneGenConfig cfg;
  std::string shapes = "rectangle,ellipse";
  std::string stuff_layout = "bands";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--height", cfg.height, "scene height in pixels")
        ->capture_default_str();
    cmd->add_option("--width", cfg.width, "scene width in pixels")
        ->capture_default_str();
    cmd->add_option("--min-instances", cfg.n_instances_min,
                    "minimum number of instances")
        ->capture_default_str();
    cmd->add_option("--max-instances", cfg.n_instances_max,
                    "maximum number of instances")
        ->capture_default_str();
    cmd->add_option("--shapes", shapes, "comma list of rectangle,ellipse")
        ->capture_default_str();
    cmd->add_option("--size-min", cfg.size_min, "minimum shape side, pixels")
        ->capture_default_str();
    cmd->add_option("--size-max", cfg.size_max, "maximum shape side, pixels")
        ->capture_default_str();
    cmd->add_flag("--occlusion,!--no-occlusion", cfg.occlusion_allowed,
                  "allow shapes to overlap");
    cmd->add_option("--stuff-layout", stuff_layout, "bands or fill")
        ->capture_default_str();
    cmd->add_option("--things", cfg.n_thing_classes, "number of thing classes")
        ->capture_default_str();
    cmd->add_option("--stuffs", cfg.n_stuff_classes, "number of stuff classes")
        ->capture_default_str();
  }

  SceneGenConfig resolve(std::uint64_t seed) const {
    SceneGenConfig out = cfg;
    out.rng_seed = seed;
    out.shapes = parse_shapes(shapes);
    if (stuff_layout == "bands") {
      out.stuff_layout = StuffLayout::kHorizontalBands;
    } else if (stuff_layout == "fill") {
      out.stuff_layout = StuffLayout::kSingleFill;
    } else {
      throw CLI::ValidationError("--stuff-layout",
                                 "must be 'bands' or 'fill'");
    }
    return out;
  }
};

struct NoiseFlags {
  NoiseConfig cfg;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--label-flip-rate", cfg.label_flip_rate,
                    "per-pixel probability of a wrong semantic label")
        ->capture_default_str();
    cmd->add_option("--distance-sigma,--noise", cfg.distance_sigma,
                    "stddev of additive Gaussian distance noise, pixels")
        ->capture_default_str();
    cmd->add_option("--center-dropout", cfg.center_dropout,
                    "probability a positive center cell is zeroed")
        ->capture_default_str();
    cmd->add_option("--center-false-rate", cfg.center_false_rate,
                    "probability a negative center cell turns positive")
        ->capture_default_str();
  }
};

struct ClusterFlags {
  ClusterConfig cfg;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed-threshold", cfg.seed_threshold,
                    "minimum center probability for a seed candidate")
        ->capture_default_str();
    cmd->add_option("--nms-iou", cfg.nms_iou,
                    "IoU above which NMS suppresses a candidate")
        ->capture_default_str();
    cmd->add_option("--tiebreak-margin", cfg.center_tiebreak_margin,
                    "IoU gap under which the vote falls back to centers")
        ->capture_default_str();
    cmd->add_option("--min-pixels", cfg.min_instance_pixels,
                    "minimum supporters a seed needs to survive")
        ->capture_default_str();
  }
};

std::map<std::uint16_t, double> scores_from_seeds(const std::vector<Seed>& seeds) {
  std::map<std::uint16_t, double> scores;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    scores[static_cast<std::uint16_t>(i + 1)] = seeds[i].score;
  return scores;
}

std::string diagnostics_kv(const ClusterDiagnostics& d) {
  std::string t;
  t += "n_candidates=" + std::to_string(d.n_candidates) + "\n";
  t += "n_seeds=" + std::to_string(d.n_seeds) + "\n";
  t += "n_pruned=" + std::to_string(d.n_pruned) + "\n";
  t += "n_orphan_pixels=" + std::to_string(d.n_orphan_pixels) + "\n";
  for (const auto& [cls, counts] : d.supporters_per_class) {
    t += "supporters." + std::to_string(cls) + "=";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) t += ",";
      t += std::to_string(counts[i]);
    }
    t += "\n";
  }
  return t;
}

void write_eval_reports(const PQReport& pq, const APReport& ap,
                        const ClassTable& table, const fs::path& prefix) {
  write_text(pq_report_table(pq, table), prefix.string() + ".pq.txt");
  write_text(pq_report_kv(pq), prefix.string() + ".pq.kv");
  write_text(ap_report_table(ap, table), prefix.string() + ".ap.txt");
  write_text(ap_report_kv(ap), prefix.string() + ".ap.kv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"common attribute support segmentation toolkit"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a synthetic scene");
  auto gen_flags = std::make_shared<GenFlags>();
  auto gen_seed = std::make_shared<std::uint64_t>(0);
  auto gen_out = std::make_shared<std::string>();
  gen->add_option("--seed", *gen_seed, "rng seed")->required();
  gen->add_option("--out", *gen_out, "scene manifest path")->required();
  gen_flags->add_to(gen);
  gen->callback([gen_flags, gen_seed, gen_out] {
    const SceneGenConfig cfg = gen_flags->resolve(*gen_seed);
    const InstanceScene scene = generate_scene(cfg);
    write_scene(scene, cfg.rng_seed, *gen_out);
  });

  // --- targets ---
  auto* targets = app.add_subcommand("targets", "encode a scene as ideal predictions");
  auto tgt_scene = std::make_shared<std::string>();
  auto tgt_out = std::make_shared<std::string>();
  auto tgt_stride = std::make_shared<int>(1);
  auto tgt_cf = std::make_shared<double>(0.2);
  targets->add_option("--scene", *tgt_scene, "scene manifest")->required();
  targets->add_option("--out", *tgt_out, "bundle manifest path")->required();
  targets->add_option("--stride", *tgt_stride, "output stride")->capture_default_str();
  targets->add_option("--center-fraction", *tgt_cf,
                      "central sub-box fraction per side")
      ->capture_default_str();
  targets->callback([tgt_scene, tgt_out, tgt_stride, tgt_cf] {
    const LoadedScene loaded = read_scene(*tgt_scene);
    const PredictionBundle b = make_targets(loaded.scene, *tgt_stride, *tgt_cf);
    write_bundle(b, *tgt_out);
  });

  // --- corrupt ---
  auto* corrupt_cmd = app.add_subcommand("corrupt", "add noise to a bundle");
  auto cor_in = std::make_shared<std::string>();
  auto cor_out = std::make_shared<std::string>();
  auto cor_flags = std::make_shared<NoiseFlags>();
  auto cor_seed = std::make_shared<std::uint64_t>(0);
  corrupt_cmd->add_option("--in", *cor_in, "input bundle manifest")->required();
  corrupt_cmd->add_option("--out", *cor_out, "output bundle manifest")->required();
  corrupt_cmd->add_option("--seed", *cor_seed, "rng seed")->required();
  cor_flags->add_to(corrupt_cmd);
  corrupt_cmd->callback([cor_in, cor_out, cor_flags, cor_seed] {
    NoiseConfig n = cor_flags->cfg;
    n.rng_seed = *cor_seed;
    const PredictionBundle b = read_bundle(*cor_in);
    write_bundle(corrupt(b, n), *cor_out);
  });

  // --- cluster ---
  auto* cluster_cmd = app.add_subcommand("cluster", "run the support vote");
  auto clu_in = std::make_shared<std::string>();
  auto clu_out = std::make_shared<std::string>();
  auto clu_seeds = std::make_shared<std::string>();
  auto clu_diag = std::make_shared<std::string>();
  auto clu_flags = std::make_shared<ClusterFlags>();
  cluster_cmd->add_option("--in", *clu_in, "input bundle manifest")->required();
  cluster_cmd->add_option("--out", *clu_out, "output panoptic manifest")->required();
  cluster_cmd->add_option("--seeds", *clu_seeds,
                          "seeds file path (default: <out>.seeds.txt)");
  cluster_cmd->add_option("--diagnostics", *clu_diag, "diagnostics file path");
  clu_flags->add_to(cluster_cmd);
  cluster_cmd->callback([clu_in, clu_out, clu_seeds, clu_diag, clu_flags] {
    const PredictionBundle b = read_bundle(*clu_in);
    const ClusterResult res = run_pipeline(b, clu_flags->cfg);
    write_panoptic(res.panoptic, b.classes, *clu_out);
    const fs::path seeds_path = clu_seeds->empty()
                                    ? fs::path(*clu_out).replace_extension(".seeds.txt")
                                    : fs::path(*clu_seeds);
    write_seeds(res.seeds, seeds_path);
    if (!clu_diag->empty())
      write_text(diagnostics_kv(res.diagnostics), *clu_diag);
  });

  // --- loss ---
  auto* loss_cmd = app.add_subcommand("loss", "evaluate the training objective");
  auto loss_pred = std::make_shared<std::string>();
  auto loss_target = std::make_shared<std::string>();
  auto loss_w = std::make_shared<LossWeights>();
  loss_cmd->add_option("--pred", *loss_pred, "prediction bundle manifest")->required();
  loss_cmd->add_option("--target", *loss_target, "target bundle manifest")->required();
  loss_cmd->add_option("--alpha", loss_w->alpha, "classification weight")
      ->capture_default_str();
  loss_cmd->add_option("--beta", loss_w->beta, "distance regression weight")
      ->capture_default_str();
  loss_cmd->add_option("--gamma", loss_w->gamma, "center probability weight")
      ->capture_default_str();
  loss_cmd->callback([loss_pred, loss_target, loss_w] {
    const PredictionBundle pred = read_bundle(*loss_pred);
    const PredictionBundle target = read_bundle(*loss_target);
    const LossReport rep = bundle_loss(pred, target, *loss_w);
    std::cout << "l_cls=" << fmt_fixed(rep.l_cls, 6) << "\n"
              << "l_common=" << fmt_fixed(rep.l_common, 6) << "\n"
              << "l_prob=" << fmt_fixed(rep.l_prob, 6) << "\n"
              << "l_total=" << fmt_fixed(rep.l_total, 6) << "\n";
  });

  // --- eval ---
  auto* eval_cmd = app.add_subcommand("eval", "score a prediction against a scene");
  auto eval_pred = std::make_shared<std::string>();
  auto eval_gt = std::make_shared<std::string>();
  auto eval_seeds = std::make_shared<std::string>();
  auto eval_prefix = std::make_shared<std::string>();
  eval_cmd->add_option("--pred", *eval_pred, "predicted panoptic manifest")->required();
  eval_cmd->add_option("--gt", *eval_gt, "ground-truth scene manifest")->required();
  eval_cmd->add_option("--seeds", *eval_seeds, "seeds file with instance scores")
      ->required();
  eval_cmd->add_option("--out-prefix", *eval_prefix, "report path prefix")->required();
  eval_cmd->callback([eval_pred, eval_gt, eval_seeds, eval_prefix] {
    const LoadedPanoptic pred = read_panoptic(*eval_pred);
    const LoadedScene gt = read_scene(*eval_gt);
    const std::vector<Seed> seeds = read_seeds(*eval_seeds);
    const PanopticMap gt_pano = to_panoptic(gt.scene, pred.map.stride());
    const PQReport pq = panoptic_quality(pred.map, gt_pano, pred.classes);
    const APReport ap = average_precision(pred.map, scores_from_seeds(seeds),
                                          gt_pano, pred.classes);
    write_eval_reports(pq, ap, pred.classes, *eval_prefix);
    std::cout << "PQ=" << fmt4(pq.all.pq) << " mAP=" << fmt4(ap.map) << "\n";
  });

  // --- pipeline ---
  auto* pipe = app.add_subcommand(
      "pipeline", "gen, targets, corrupt, cluster, and eval in one run");
  auto pipe_seed = std::make_shared<std::uint64_t>(0);
  auto pipe_out = std::make_shared<std::string>();
  auto pipe_gen = std::make_shared<GenFlags>();
  auto pipe_noise = std::make_shared<NoiseFlags>();
  auto pipe_cluster = std::make_shared<ClusterFlags>();
  auto pipe_stride = std::make_shared<int>(1);
  auto pipe_cf = std::make_shared<double>(0.2);
  pipe->add_option("--seed", *pipe_seed, "rng seed for the whole run")->required();
  pipe->add_option("--out", *pipe_out, "output directory")->required();
  pipe->add_option("--stride", *pipe_stride, "working stride")->capture_default_str();
  pipe->add_option("--center-fraction", *pipe_cf, "central sub-box fraction")
      ->capture_default_str();
  pipe_gen->add_to(pipe);
  pipe_noise->add_to(pipe);
  pipe_cluster->add_to(pipe);
  pipe->callback([pipe_seed, pipe_out, pipe_gen, pipe_noise, pipe_cluster,
                  pipe_stride, pipe_cf] {
    const fs::path dir(*pipe_out);
    fs::create_directories(dir);

    const SceneGenConfig cfg = pipe_gen->resolve(*pipe_seed);
    const InstanceScene scene = generate_scene(cfg);
    write_scene(scene, cfg.rng_seed, dir / "scene.txt");

    const PredictionBundle target = make_targets(scene, *pipe_stride, *pipe_cf);
    write_bundle(target, dir / "target.txt");

    NoiseConfig noise = pipe_noise->cfg;
    noise.rng_seed = mix64(*pipe_seed);  // decoupled from the scene stream
    const PredictionBundle pred = corrupt(target, noise);
    write_bundle(pred, dir / "pred.txt");

    const ClusterResult res = run_pipeline(pred, pipe_cluster->cfg);
    write_panoptic(res.panoptic, pred.classes, dir / "pred_pano.txt");
    write_seeds(res.seeds, dir / "pred_pano.seeds.txt");
    write_text(diagnostics_kv(res.diagnostics), dir / "diagnostics.txt");

    const PanopticMap gt_pano = to_panoptic(scene, *pipe_stride);
    write_panoptic(gt_pano, scene.classes, dir / "gt_pano.txt");

    const PQReport pq = panoptic_quality(res.panoptic, gt_pano, pred.classes);
    const APReport ap = average_precision(res.panoptic, scores_from_seeds(res.seeds),
                                          gt_pano, pred.classes);
    write_eval_reports(pq, ap, pred.classes, dir / "eval");
    render_panoptic(res.panoptic, pred.classes, dir / "pred_pano.ppm");

    std::cout << "PQ=" << fmt4(pq.all.pq) << " mAP=" << fmt4(ap.map) << "\n";
  });

  // --- render ---
  auto* render_cmd = app.add_subcommand("render", "colorize a panoptic map");
  auto ren_in = std::make_shared<std::string>();
  auto ren_out = std::make_shared<std::string>();
  render_cmd->add_option("--in", *ren_in, "panoptic manifest")->required();
  render_cmd->add_option("--out", *ren_out, "output .ppm path")->required();
  render_cmd->callback([ren_in, ren_out] {
    const LoadedPanoptic p = read_panoptic(*ren_in);
    render_panoptic(p.map, p.classes, *ren_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
