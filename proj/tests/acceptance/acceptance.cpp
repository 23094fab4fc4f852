// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "temp_dir.hpp"
#include "tcow/annotation_io.hpp"
#include "tcow/baselines.hpp"
#include "tcow/cli.hpp"
#include "tcow/file_io.hpp"
#include "tcow/label.hpp"
#include "tcow/loss.hpp"
#include "tcow/mask_io.hpp"
#include "tcow/metrics.hpp"
#include "tcow/render.hpp"
#include "tcow/scene.hpp"
#include "tcow/scene_io.hpp"

namespace tcow {
namespace {

using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; only the first few are reported.
  void fail(const std::string& why) {
    if (pass || failures < 3) detail << (failures ? "; " : "") << why;
    pass = false;
    ++failures;
  }
  int failures = 0;
};

// --- 1 ---------------------------------------------------------------------

Outcome raster_vs_raycast() {
  Outcome o;
  double raster_s = 0.0;
  std::size_t pixels = 0, mismatched = 0;
  const auto start = Clock::now();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomClutterConfig cfg;
    cfg.n_static = 4;
    cfg.n_dynamic = 2;
    cfg.width = 160;
    cfg.height = 120;
    const SceneSpec scene = gen_random_clutter(cfg, 1000 + seed);
    const auto r0 = Clock::now();
    const auto frames = rasterize_video(scene);
    raster_s += seconds_since(r0);
    for (int t = 0; t < scene.frame_count; ++t) {
      const IdGrid expected = oracle::raycast_visible(scene, t);
      const auto got = frames[static_cast<std::size_t>(t)].visible.data();
      const auto want = expected.data();
      for (std::size_t i = 0; i < got.size(); ++i) mismatched += got[i] != want[i];
      pixels += got.size();
    }
  }
  const double total_s = seconds_since(start);
  if (mismatched) o.fail(std::to_string(mismatched) + " mismatched pixels");
  if (total_s >= 60.0) o.fail("runtime " + std::to_string(total_s) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu pixels match, raster %.2f s, with oracle %.2f s (< 60 s)",
                pixels - mismatched, pixels, raster_s, total_s);
  if (o.pass) o.detail << buf;
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome containment_accuracy() {
  Outcome o;
  SeedStream rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Obb a = oracle::random_obb(rng, 0.2, 1.0, 0.6);
    const Obb b = oracle::random_obb(rng, 0.2, 1.0, 0.6);
    const double mc = containment_fraction(a, b, 100'000, static_cast<std::uint64_t>(i));
    const double vox = oracle::voxel_containment(a, b, 200);
    worst = std::max(worst, std::abs(mc - vox));
    if (std::abs(mc - vox) > 0.02) o.fail("pair " + std::to_string(i) + " off by " + std::to_string(mc - vox));
  }
  int identical_ok = 0;
  for (int i = 0; i < 10; ++i) {
    const Obb b = oracle::random_obb(rng, 0.1, 2.0, 5.0);
    identical_ok += containment_fraction(b, b, 100'000, rng.next_bits()) == 1.0;
  }
  if (identical_ok != 10) o.fail("identical boxes not exactly 1");
  if (o.pass) o.detail << "max |MC - voxel| = " << worst << " over 50 pairs (<= 0.02); identical boxes = 1.0";
  return o;
}

// --- 3 ---------------------------------------------------------------------

// Nested chain target ⊂ L1 ⊂ ... ⊂ Ln, each level enclosing the bounding
// sphere of the previous one, plus two loose distractor boxes.
std::vector<Obb> nested_boxes(SeedStream& rng, int levels) {
  std::vector<Obb> boxes;
  const Vec3 center(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
  Obb inner(center, Vec3(rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4), rng.uniform(0.1, 0.4)),
            oracle::random_rotation(rng));
  boxes.push_back(inner);
  for (int l = 0; l < levels; ++l) {
    const double r = boxes.back().half_extents().norm();
    const Vec3 half(r + rng.uniform(0.01, 0.3), r + rng.uniform(0.01, 0.3), r + rng.uniform(0.01, 0.3));
    const Vec3 jitter = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)) * 0.005;
    boxes.emplace_back(boxes.back().center() + jitter, half, oracle::random_rotation(rng));
  }
  for (int d = 0; d < 2; ++d) {
    const Vec3 c = center + Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    boxes.emplace_back(c, Vec3::Constant(rng.uniform(0.2, 1.5)), oracle::random_rotation(rng));
  }
  return boxes;
}

Outcome outermost_container() {
  Outcome o;
  SeedStream rng(99);
  int agreed = 0, outermost = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int levels = 2 + trial % 3;
    const auto boxes = nested_boxes(rng, levels);
    const int n = static_cast<int>(boxes.size());
    ContainmentMatrix c(n);
    for (int k = 1; k <= n; ++k) {
      for (int l = 1; l <= n; ++l) {
        if (k != l) c.at(k, l) = containment_fraction(boxes[static_cast<std::size_t>(k - 1)], boxes[static_cast<std::size_t>(l - 1)], 20'000, rng.next_bits());
      }
    }
    bool all = true;
    for (int k = 1; k <= n; ++k) all = all && main_container(c, k) == oracle::exhaustive_outermost(c, k, 0.75);
    agreed += all;
    // Distractors may swallow the chain; the oracle then decides alone.
    const auto unique = oracle::uncontained_candidate(c, 1, 0.75);
    const bool chain_on_top = c.at(levels + 1, levels + 2) < 0.75 && c.at(levels + 1, levels + 3) < 0.75;
    if (chain_on_top && unique == levels + 1) outermost += main_container(c, 1) == levels + 1;
    else ++outermost;
    if (!all) o.fail("trial " + std::to_string(trial) + " disagrees with exhaustive search");
  }
  if (outermost != 100) o.fail("outermost level not picked in " + std::to_string(100 - outermost) + " trials");

  // Three-level example: target inside A inside B inside C.
  ContainmentMatrix c(4);
  for (int l = 2; l <= 4; ++l) c.at(1, l) = 1.0;
  c.at(2, 3) = c.at(2, 4) = c.at(3, 4) = 1.0;
  c.at(3, 2) = 0.3;
  c.at(4, 3) = 0.6;
  const bool example = main_container(c, 1) == 4 && oracle::exhaustive_outermost(c, 1, 0.75) == 4;
  if (!example) o.fail("three-level example did not pick the outermost box");
  if (o.pass) o.detail << agreed << "/100 nested configs (2-4 levels) match exhaustive search; three-level example -> 4";
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome labeling_end_to_end() {
  Outcome o;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SceneSpec scene = gen_container_script({}, seed);
    const auto masks = rasterize_video(scene);
    LabelOptions opt;
    opt.seed = seed;
    const Annotation a = annotate(scene, masks, 1, opt);
    const std::string tag = "seed " + std::to_string(seed);
    bool good = true;
    if (a.events.containment_events() != 1) {
      o.fail(tag + ": " + std::to_string(a.events.containment_events()) + " containment events");
      good = false;
      continue;
    }
    const int onset = a.events.containment.front().onset;
    for (int t = 0; t < scene.frame_count; ++t) {
      const auto i = static_cast<std::size_t>(t);
      if (t >= onset && !any(a.triplet.container[i])) {
        o.fail(tag + ": empty container mask at frame " + std::to_string(t));
        good = false;
      }
      if (any(a.triplet.occluder[i])) {
        const auto occ = a.labels[i].occlusion_of(1);
        if (!occ || *occ < kOcclusionThreshold) {
          o.fail(tag + ": occluder mask with o < 0.95 at frame " + std::to_string(t));
          good = false;
        }
      }
    }
    ok += good;
  }
  if (o.pass) o.detail << ok << "/20 container-script seeds: 1 containment event, m_c nonzero after onset, occlusion invariant holds";
  return o;
}

// --- 5 ---------------------------------------------------------------------

BitPlane random_bits(SeedStream& rng, int h, int w, double p) {
  BitPlane b(h, w, 0);
  for (auto& v : b.data()) v = rng.bernoulli(p);
  return b;
}

SoftPlane random_soft(SeedStream& rng, int h, int w) {
  SoftPlane s(h, w, 0.0f);
  for (auto& v : s.data()) v = static_cast<float>(rng.uniform());
  return s;
}

Outcome metric_identities() {
  Outcome o;
  SeedStream rng(555);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<VideoReport> reports;
    double pooled = 0.0;
    std::size_t n = 0;
    const int videos = rng.uniform_int(1, 8);
    for (int v = 0; v < videos; ++v) {
      AnnotationTriplet gt;
      gt.target_id = 1;
      PredictionTriplet pred;
      std::vector<FrameLabel> labels;
      const int frames = rng.uniform_int(1, 30);
      for (int t = 0; t < frames; ++t) {
        const bool occluded = rng.bernoulli(0.5);
        gt.target.push_back(random_bits(rng, 6, 8, 0.3));
        gt.occluder.push_back(occluded ? random_bits(rng, 6, 8, 0.4) : BitPlane(6, 8, 0));
        gt.container.push_back(BitPlane(6, 8, 0));
        pred.target.push_back(random_soft(rng, 6, 8));
        pred.occluder.push_back(random_soft(rng, 6, 8));
        pred.container.push_back(SoftPlane(6, 8, 0.0f));
        FrameLabel l;
        l.occlusion = {occluded ? 1.0 : 0.0, std::nullopt};
        l.containment = ContainmentMatrix(2);
        l.main_occluder = {occluded ? std::optional<int>(2) : std::nullopt, std::nullopt};
        l.main_container = {std::nullopt, std::nullopt};
        labels.push_back(l);
        if (occluded) {
          pooled += oracle::naive_iou(binarize(pred.occluder.back(), 0.5), gt.occluder.back());
          ++n;
        }
      }
      reports.push_back(score_video(pred, gt, labels));
    }
    const AggregateReport agg = aggregate(reports);
    if (n == 0) {
      if (agg.j_occl) o.fail("J_occl defined without occluded frames");
      continue;
    }
    const double err = std::abs(*agg.j_occl - pooled / static_cast<double>(n));
    worst = std::max(worst, err);
    if (err > 1e-12) o.fail("micro-average off by " + std::to_string(err));
  }
  const BitPlane empty(4, 4, 0);
  BitPlane some(4, 4, 0);
  some(2, 2) = 1;
  if (frame_iou(to_soft(empty), empty) != 1.0) o.fail("empty/empty IoU != 1");
  if (frame_iou(to_soft(some), empty) != 0.0) o.fail("empty GT with nonempty prediction IoU != 0");
  if (o.pass) o.detail << "micro J_occl vs pooled max error " << worst << " (<= 1e-12); empty/empty = 1; empty GT/nonempty pred = 0";
  return o;
}

// --- 6, 7 ------------------------------------------------------------------

struct PassFixture {
  SceneSpec scene;
  std::vector<FrameMasks> masks;
  Annotation gt;
};

PassFixture make_fixture(SceneSpec scene) {
  PassFixture f{std::move(scene), {}, {}};
  f.masks = rasterize_video(f.scene);
  LabelOptions opt;
  opt.samples = 5000;
  f.gt = annotate(f.scene, f.masks, 1, opt);
  return f;
}

Outcome heuristic_ordering() {
  Outcome o;
  std::vector<VideoReport> copy, still, linear;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    OcclusionPassConfig cfg;
    cfg.mode = OcclusionPassMode::moving_target;
    const PassFixture f = make_fixture(gen_occlusion_pass(cfg, seed));
    const auto score = [&](BaselineMethod m) {
      return score_video(run_baseline(m, f.gt.triplet, f.gt.labels, f.masks, kOcclusionThreshold), f.gt.triplet,
                         f.gt.labels);
    };
    copy.push_back(score(BaselineMethod::copy_query));
    still.push_back(score(BaselineMethod::static_mask));
    linear.push_back(score(BaselineMethod::linear_extrapolation));
  }
  const AggregateReport c = aggregate(copy), s = aggregate(still), l = aggregate(linear);
  if (!(*l.j_tgt_all >= *s.j_tgt_all && *s.j_tgt_all >= *c.j_tgt_all)) o.fail("J_tgt,all ordering violated");
  if (!l.j_tgt_invis || *l.j_tgt_invis < 0.95) o.fail("linear J_tgt,invis < 0.95");
  if (!s.j_tgt_invis || *s.j_tgt_invis > 0.5) o.fail("static J_tgt,invis > 0.5");
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "J_tgt,all linear %.3f >= static %.3f >= copy %.3f; J_tgt,invis linear %.3f (>= 0.95), static %.3f "
                "(<= 0.5) over 20 scenes",
                *l.j_tgt_all, *s.j_tgt_all, *c.j_tgt_all, l.j_tgt_invis.value_or(-1), s.j_tgt_invis.value_or(-1));
  if (o.pass) o.detail << buf;
  else o.detail << " [" << buf << "]";
  return o;
}

Outcome jump_to_occluder_recursion() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PassFixture f = make_fixture(oracle::three_layer_occlusion(seed));
    int expected = -1;  // first frame with panel 2 at least 95% hidden, by ray casting
    for (int t = 0; t < f.scene.frame_count && expected < 0; ++t) {
      const double xr = static_cast<double>(count(oracle::raycast_xray(f.scene, t, 2)));
      const double vis = static_cast<double>(count(select(oracle::raycast_visible(f.scene, t), 2)));
      if (xr > 0 && 1.0 - vis / xr >= kOcclusionThreshold) expected = t;
    }
    const PredictionTriplet p = jump_to_occluder(f.gt.triplet, f.gt.labels, f.masks);
    int switched = -1;
    for (int t = 0; t < f.scene.frame_count && switched < 0; ++t) {
      const auto i = static_cast<std::size_t>(t);
      const BitPlane m = binarize(p.occluder[i], 0.5);
      if (any(m) && m == f.masks[i].xray_of(3)) switched = t;
    }
    if (expected < 0 || switched != expected) {
      o.fail("three-layer seed " + std::to_string(seed) + ": switch at " + std::to_string(switched) + ", oracle " +
             std::to_string(expected));
    }
  }
  std::size_t occluded = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OcclusionPassConfig cfg;
    cfg.mode = seed % 2 ? OcclusionPassMode::sweeping_occluder : OcclusionPassMode::moving_target;
    const PassFixture f = make_fixture(gen_occlusion_pass(cfg, seed));
    const VideoReport r = score_video(jump_to_occluder(f.gt.triplet, f.gt.labels, f.masks), f.gt.triplet, f.gt.labels);
    occluded += r.n_occl;
    if (r.n_occl == 0 || r.j_occl != 1.0) o.fail("single-occluder seed " + std::to_string(seed) + ": J_occl != 1");
  }
  if (o.pass) o.detail << "switch frame matches ray-cast oracle on 10 three-layer fixtures; J_occl = 1.0 on " << occluded << " occluded frames of 10 single-occluder fixtures";
  return o;
}

// --- 8 ---------------------------------------------------------------------

Outcome loss_identities() {
  Outcome o;
  SeedStream rng(808);
  double worst_boot = 0.0, worst_jac = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int h = rng.uniform_int(1, 20), w = rng.uniform_int(1, 20);
    const SoftPlane p = random_soft(rng, h, w);
    const BitPlane g = random_bits(rng, h, w, rng.uniform());
    const double full = bce(p, g);
    worst_boot = std::max(worst_boot, std::abs(bootstrapped_bce(p, g, 1.0) - full) / full);
    const BitPlane a = random_bits(rng, h, w, rng.uniform());
    if (any(a) || any(g)) {
      for (auto s : {JaccardSurrogate::min_max, JaccardSurrogate::product}) {
        worst_jac = std::max(worst_jac, std::abs(soft_jaccard(to_soft(a), g, s) - (1.0 - frame_iou(to_soft(a), g))));
      }
    }
    // o = 1, beta = 5: the per-frame target BCE is exactly 5x, in both
    // the plain and the bootstrapped term.
    const std::optional<double> occ1[] = {1.0}, occ0[] = {0.0};
    const std::uint8_t present[] = {1};
    const LossConfig cfg;
    const ChannelLoss hidden = channel_loss(std::span(&p, 1), std::span(&g, 1), occ1, present, Channel::target, cfg);
    const ChannelLoss shown = channel_loss(std::span(&p, 1), std::span(&g, 1), occ0, present, Channel::target, cfg);
    if (hidden.bce != 5.0 * shown.bce || hidden.bootstrapped != 5.0 * shown.bootstrapped) o.fail("beta scaling not exactly 5");
    if (bce(p, g, occlusion_weight(1.0, 5.0)) != 5.0 * full) o.fail("bce weight not exactly 5");
  }
  if (worst_boot > 1e-12) o.fail("bootstrapped(k=1) vs bce relative error " + std::to_string(worst_boot));
  if (worst_jac > 1e-12) o.fail("soft Jaccard vs 1 - IoU error " + std::to_string(worst_jac));
  if (bootstrap_schedule(0.0) != 1.0) o.fail("schedule(0) != 1");
  for (double p : {0.1, 0.2, 0.5, 1.0}) {
    if (bootstrap_schedule(p) != 0.15) o.fail("schedule(" + std::to_string(p) + ") != 0.15");
  }
  if (o.pass) {
    o.detail << "bootstrapped(k=1) vs bce rel " << worst_boot << "; soft Jaccard vs 1-IoU " << worst_jac
             << "; beta weight exactly 5x; schedule 0 -> 1, >= 0.1 -> 0.15";
  }
  return o;
}

// --- 9 ---------------------------------------------------------------------

int tcow_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tcow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

bool run_pipeline(const fs::path& dir, const std::string& kind, const std::string& seed) {
  const std::string d = dir.string();
  const std::vector<std::vector<std::string>> steps = {
      {"generate", kind, "--seed", seed, "--width", "160", "--height", "120", "--out", d + "/scene.json"},
      {"render", "--scene", d + "/scene.json", "--out", d + "/masks", "--cartoon"},
      {"label", "--scene", d + "/scene.json", "--masks", d + "/masks", "--target", "1", "--seed", seed, "--out", d + "/ann"},
      {"baseline", "--method", "linear-extrapolation", "--annotation", d + "/ann", "--out", d + "/linear"},
      {"baseline", "--method", "jump-to-occluder", "--annotation", d + "/ann", "--masks", d + "/masks", "--out", d + "/jump"},
      {"eval", "--pred", d + "/linear", "--gt", d + "/ann", "--pred", d + "/jump", "--gt", d + "/ann", "--out", d + "/report.json"},
      {"loss", "--pred", d + "/linear", "--gt", d + "/ann", "--out", d + "/loss.json"},
  };
  for (const auto& s : steps) {
    if (tcow_cli(s) != cli::kExitOk) return false;
  }
  return true;
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism_and_round_trip() {
  Outcome o;
  std::size_t compared = 0;
  for (const char* kind : {"container-script", "occlusion-pass"}) {
    const testing::TempDir a(std::string("accept_a_") + kind), b(std::string("accept_b_") + kind);
    if (!run_pipeline(a.path(), kind, "7") || !run_pipeline(b.path(), kind, "7")) {
      o.fail(std::string(kind) + ": pipeline failed");
      continue;
    }
    const auto fa = files_under(a.path()), fb = files_under(b.path());
    if (fa != fb) o.fail(std::string(kind) + ": runs wrote different file sets");
    for (const fs::path& f : fa) {
      ++compared;
      if (read_file_bytes(a.path() / f) != read_file_bytes(b.path() / f)) o.fail(f.string() + " differs between runs");
    }

    // Lossless round trips of every format written by the pipeline.
    const SceneSpec scene = read_scene(a / "scene.json");
    if (dump_scene(scene_from_json(nlohmann::json::parse(dump_scene(scene)))) != dump_scene(scene)) o.fail("scene JSON");
    for (const char* m : {"masks/visible.tcmask", "masks/xray.tcmask", "ann/triplet.tcmask", "linear/prediction.tcmask"}) {
      const auto bytes = read_file_bytes(a / m);
      if (encode_tcmask(decode_tcmask(bytes)) != bytes) o.fail(std::string(m) + " round trip");
    }
    const auto frames = frames_from_volumes(read_tcmask(a / "masks/visible.tcmask"), read_tcmask(a / "masks/xray.tcmask"));
    if (frames != rasterize_video(scene)) o.fail("masks differ from a fresh render");
    const Annotation ann = read_annotation(a / "ann");
    const testing::TempDir c(std::string("accept_c_") + kind);
    write_annotation(c.path(), ann);
    if (read_annotation(c.path()).labels != ann.labels || read_annotation(c.path()).triplet != ann.triplet) o.fail("annotation round trip");
    for (const BitPlane& p : ann.triplet.target) {
      if (rle_decode(rle_from_json(rle_to_json(rle_encode(p)))) != p) o.fail("RLE round trip");
    }
    const auto ppm = read_file_bytes(a / "masks/cartoon/frame_0000.ppm");
    if (encode_ppm(decode_ppm(ppm)) != ppm) o.fail("PPM round trip");
    const auto report = nlohmann::json::parse(read_file_text(a / "report.json"));
    for (const auto& v : report.at("videos")) {
      auto trimmed = v;
      trimmed.erase("name");
      trimmed.erase("method");
      if (to_json(video_report_from_json(v)) != trimmed) o.fail("report round trip");
    }
    const LossConfig cfg;
    if (loss_config_from_json(nlohmann::json::parse(to_json(cfg).dump())) != cfg) o.fail("loss config round trip");
  }
  if (o.pass) o.detail << compared << " files byte-identical across two runs; scene, tcmask, annotation, RLE, PPM, report and loss config round-trip";
  return o;
}

// --- 10 --------------------------------------------------------------------

double pipeline_seconds(int jobs, std::uint64_t seed, SceneSpec* scene_out = nullptr) {
  const auto start = Clock::now();
  RandomClutterConfig cfg;
  cfg.n_static = 8;
  cfg.n_dynamic = 4;
  cfg.frame_count = 36;
  cfg.width = 480;
  cfg.height = 360;
  const SceneSpec scene = gen_random_clutter(cfg, seed);
  const auto masks = rasterize_video(scene, jobs);
  LabelOptions opt;
  opt.jobs = jobs;
  const auto labels = label_video(scene, masks, opt);
  if (labels.size() != 36) return -1.0;
  if (scene_out) *scene_out = scene;
  return seconds_since(start);
}

Outcome performance_budget() {
  Outcome o;
  SceneSpec scene;
  const double single = pipeline_seconds(1, 21, &scene);
  const double four = pipeline_seconds(4, 21);
  const double speedup = single / four;
  const unsigned cores = std::thread::hardware_concurrency();
  if (scene.num_instances() != 12 || scene.camera.width != 480) o.fail("scene is not 12 objects at 480x360");
  if (single >= 30.0) o.fail("single-threaded " + std::to_string(single) + " s");
  // Near-linear: at least 3x with 4 jobs.
  if (speedup < 3.0) o.fail("speedup at 4 jobs only " + std::to_string(speedup) + "x (>= 3x needed)");
  char buf[200];
  std::snprintf(buf, sizeof buf, "1 job %.2f s (< 30 s), 4 jobs %.2f s, speedup %.2fx (>= 3x), %u hardware thread(s)",
                single, four, speedup, cores);
  if (o.pass) o.detail << buf;
  else o.detail << " [" << buf << "]";
  return o;
}

}  // namespace
}  // namespace tcow

int main() {
  using namespace tcow;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rasterizer matches ray-cast oracle", raster_vs_raycast},
      {"containment Monte Carlo accuracy", containment_accuracy},
      {"outermost container selection", outermost_container},
      {"labeling end to end", labeling_end_to_end},
      {"metric identities", metric_identities},
      {"heuristic ordering", heuristic_ordering},
      {"jump-to-occluder recursion", jump_to_occluder_recursion},
      {"loss identities", loss_identities},
      {"determinism and round trip", determinism_and_round_trip},
      {"performance budget", performance_budget},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str(),
                seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
