#include "tcow/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tcow/annotation_io.hpp"
#include "tcow/baselines.hpp"
#include "tcow/file_io.hpp"
#include "tcow/label.hpp"
#include "tcow/loss.hpp"
#include "tcow/mask_io.hpp"
#include "tcow/metrics.hpp"
#include "tcow/render.hpp"
#include "tcow/scene.hpp"
#include "tcow/scene_io.hpp"

namespace tcow::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateOptions {
  std::uint64_t seed = 0;
  std::string out;
  bool to_stdout = false;
  bool print_config = false;
  ContainerScriptConfig container;
  RandomClutterConfig clutter;
  OcclusionPassConfig pass;
};

struct RenderOptions {
  std::string scene;
  std::string out;
  bool cartoon = false;
  std::uint64_t palette_seed = 0;
  int jobs = 1;
  bool print_config = false;
};

struct LabelCmdOptions {
  std::string scene;
  std::string masks;
  std::string out;
  int target = 0;
  std::uint64_t seed = 0;
  std::size_t samples = kDefaultContainmentSamples;
  Thresholds thresholds;
  int jobs = 1;
  bool print_config = false;
};

struct BaselineOptions {
  std::string method;
  std::string annotation;
  std::string masks;
  std::string out;
  double occlusion_threshold = kOcclusionThreshold;
  bool print_config = false;
};

struct EvalOptions {
  std::vector<std::string> pred;
  std::vector<std::string> gt;
  std::string out;
  double threshold = kDefaultBinarizeThreshold;
  double occlusion_threshold = kOcclusionThreshold;
  bool print_config = false;
};

struct LossOptions {
  std::string pred;
  std::string gt;
  std::string config;
  std::optional<double> progress;
  std::string out;
  bool print_config = false;
};

const std::map<std::string, OcclusionPassMode> kPassModes = {
    {"moving-target", OcclusionPassMode::moving_target},
    {"sweeping-occluder", OcclusionPassMode::sweeping_occluder},
    {"reversing-target", OcclusionPassMode::reversing_target},
};

std::string pass_mode_name(OcclusionPassMode mode) {
  for (const auto& [name, m] : kPassModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

json to_json(const ContainerScriptConfig& c) {
  return {{"frame_count", c.frame_count},       {"fps", c.fps},
          {"width", c.width},                   {"height", c.height},
          {"container_size", c.container_size}, {"container_height", c.container_height},
          {"size_multiplier", c.size_multiplier}, {"wall_thickness", c.wall_thickness},
          {"target_size", c.target_size},       {"pusher_size", c.pusher_size},
          {"pusher_speed", c.pusher_speed},     {"drop_height", c.drop_height},
          {"landing_time", c.landing_time},     {"contact_time", c.contact_time}};
}

json to_json(const RandomClutterConfig& c) {
  return {{"n_static", c.n_static},
          {"n_dynamic", c.n_dynamic},
          {"frame_count", c.frame_count},
          {"fps", c.fps},
          {"width", c.width},
          {"height", c.height},
          {"arena_half_size", c.arena_half_size},
          {"min_size", c.min_size},
          {"max_size", c.max_size},
          {"open_box_probability", c.open_box_probability},
          {"max_horizontal_speed", c.max_horizontal_speed},
          {"max_vertical_speed", c.max_vertical_speed}};
}

json to_json(const OcclusionPassConfig& c) {
  return {{"mode", pass_mode_name(c.mode)},          {"frame_count", c.frame_count},
          {"fps", c.fps},                            {"width", c.width},
          {"height", c.height},                      {"pixels_per_frame", c.pixels_per_frame},
          {"target_pixels", c.target_pixels},        {"hidden_frames", c.hidden_frames}};
}

json thresholds_json(const Thresholds& t) { return {{"occlusion", t.occlusion}, {"containment", t.containment}}; }

void print_config(std::ostream& out, const std::string& command, json config) {
  out << json{{"command", command}, {"config", std::move(config)}}.dump(2) << "\n";
}

// --- generate ------------------------------------------------------------

void add_common_generate(CLI::App* app, GenerateOptions& o) {
  app->add_option("--seed", o.seed, "Scene seed")->envname("TCOW_SEED");
  auto* out = app->add_option("--out", o.out, "Scene JSON output path");
  auto* std_out = app->add_flag("--stdout", o.to_stdout, "Write the scene JSON to standard output");
  out->excludes(std_out);
  app->add_flag("--print-config", o.print_config, "Print the resolved configuration");
}

void add_video_shape(CLI::App* app, int& frames, double& fps, int& width, int& height) {
  app->add_option("--frames", frames, "Frame count")->check(CLI::Range(1, 65535));
  app->add_option("--fps", fps, "Frames per second")->check(CLI::PositiveNumber);
  app->add_option("--width", width, "Image width")->check(CLI::Range(1, 65535));
  app->add_option("--height", height, "Image height")->check(CLI::Range(1, 65535));
}

int cmd_generate(const std::string& kind, const GenerateOptions& o, std::ostream& out) {
  if (o.out.empty() && !o.to_stdout) throw UsageError("one of --out or --stdout is required");
  json config;
  SceneSpec scene;
  if (kind == "container-script") {
    config = to_json(o.container);
  } else if (kind == "random-clutter") {
    config = to_json(o.clutter);
  } else {
    config = to_json(o.pass);
  }
  config["seed"] = o.seed;
  if (o.print_config) print_config(out, "generate " + kind, config);

  try {
    if (kind == "container-script") {
      scene = gen_container_script(o.container, o.seed);
    } else if (kind == "random-clutter") {
      scene = gen_random_clutter(o.clutter, o.seed);
    } else {
      scene = gen_occlusion_pass(o.pass, o.seed);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid configuration: ") + e.what());
  }

  if (o.to_stdout) {
    out << dump_scene(scene);
    return kExitOk;
  }
  write_scene(o.out, scene);
  out << kind << ": K=" << scene.num_instances() << " T=" << scene.frame_count << " seed=" << o.seed << " -> "
      << o.out << "\n";
  return kExitOk;
}

// --- render --------------------------------------------------------------

int cmd_render(const RenderOptions& o, std::ostream& out) {
  if (o.print_config) {
    print_config(out, "render",
                 {{"scene", o.scene}, {"out", o.out}, {"cartoon", o.cartoon}, {"palette_seed", o.palette_seed},
                  {"jobs", o.jobs}});
  }
  const SceneSpec scene = read_scene(o.scene);
  const std::vector<FrameMasks> frames = rasterize_video(scene, o.jobs);
  const fs::path dir = o.out;
  fs::create_directories(dir);
  write_tcmask(dir / kVisibleMask, visible_volume(frames));
  write_tcmask(dir / kXrayMask, xray_volume(frames));
  if (o.cartoon) {
    fs::create_directories(dir / "cartoon");
    for (const FrameMasks& f : frames) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame_%04d.ppm", f.frame_index);
      write_file_atomic(dir / "cartoon" / name, encode_ppm(render_cartoon(f, o.palette_seed)));
    }
  }
  out << "rendered " << frames.size() << " frames at " << scene.camera.width << "x" << scene.camera.height
      << ", K=" << scene.num_instances() << " -> " << o.out << "\n";
  return kExitOk;
}

std::vector<FrameMasks> read_masks(const fs::path& dir) {
  return frames_from_volumes(read_tcmask(dir / kVisibleMask), read_tcmask(dir / kXrayMask));
}

void check_masks_match(const SceneSpec& scene, const std::vector<FrameMasks>& frames) {
  if (static_cast<int>(frames.size()) != scene.frame_count || frames.empty() ||
      frames.front().num_instances() != scene.num_instances() || frames.front().width() != scene.camera.width ||
      frames.front().height() != scene.camera.height) {
    throw DataError("masks do not match the scene (frames, instances or resolution)");
  }
}

// --- label ---------------------------------------------------------------

void print_event(std::ostream& out, const char* kind, const Event& e) {
  out << "  " << kind << " onset=" << e.onset << " end=" << e.end << " partner=" << e.partner << "\n";
}

int cmd_label(const LabelCmdOptions& o, std::ostream& out) {
  if (o.print_config) {
    print_config(out, "label",
                 {{"scene", o.scene}, {"masks", o.masks}, {"out", o.out}, {"target", o.target}, {"seed", o.seed},
                  {"samples", o.samples}, {"thresholds", thresholds_json(o.thresholds)}, {"jobs", o.jobs}});
  }
  const SceneSpec scene = read_scene(o.scene);
  const std::vector<FrameMasks> frames = read_masks(o.masks);
  check_masks_match(scene, frames);
  if (o.target < 1 || o.target > scene.num_instances()) {
    throw UsageError("--target must be in [1, " + std::to_string(scene.num_instances()) + "]");
  }
  if (!any(select(frames.front().visible, static_cast<std::uint16_t>(o.target)))) {
    throw UsageError("target " + std::to_string(o.target) + " is not visible in frame 0");
  }
  const LabelOptions options{o.samples, o.seed, o.thresholds, o.jobs};
  const Annotation a = annotate(scene, frames, o.target, options);
  write_annotation(o.out, a, difficulty_score(a.labels, scene, o.target));
  out << "target " << o.target << ": " << a.events.occlusion_events() << " occlusion event(s), "
      << a.events.containment_events() << " containment event(s)\n";
  for (const Event& e : a.events.occlusion) print_event(out, "occlusion", e);
  for (const Event& e : a.events.containment) print_event(out, "containment", e);
  return kExitOk;
}

// --- baseline ------------------------------------------------------------

int cmd_baseline(const BaselineOptions& o, std::ostream& out) {
  BaselineMethod method;
  try {
    method = baseline_from_string(o.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.print_config) {
    print_config(out, "baseline",
                 {{"method", o.method}, {"annotation", o.annotation}, {"masks", o.masks}, {"out", o.out},
                  {"occlusion_threshold", o.occlusion_threshold}});
  }
  const Annotation a = read_annotation(o.annotation);
  std::vector<FrameMasks> frames;
  if (method == BaselineMethod::copy_query || method == BaselineMethod::jump_to_occluder) {
    if (o.masks.empty()) throw UsageError(std::string("--masks is required for ") + o.method);
    frames = read_masks(o.masks);
    if (frames.size() != a.labels.size()) throw DataError("masks and annotation differ in frame count");
  }
  const PredictionTriplet pred = run_baseline(method, a.triplet, a.labels, frames, o.occlusion_threshold);
  write_prediction(o.out, pred,
                   {o.method, a.triplet.target_id, json{{"occlusion_threshold", o.occlusion_threshold}}});
  out << o.method << ": " << pred.frames() << " frames -> " << o.out << "\n";
  return kExitOk;
}

// --- eval ----------------------------------------------------------------

std::string video_name(const fs::path& pred) {
  const fs::path p = pred.has_filename() ? pred : pred.parent_path();
  return p.filename().string();
}

void check_pair(const PredictionTriplet& pred, const Annotation& gt, const std::string& name) {
  if (pred.frames() != gt.triplet.frames()) throw DataError(name + ": prediction and ground truth differ in frame count");
  if (pred.frames() > 0 && !same_shape(pred.target.front(), gt.triplet.target.front())) {
    throw DataError(name + ": prediction and ground truth differ in resolution");
  }
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  if (o.pred.size() != o.gt.size()) throw UsageError("--pred and --gt must be given the same number of times");
  if (o.print_config) {
    print_config(out, "eval",
                 {{"pred", o.pred}, {"gt", o.gt}, {"out", o.out}, {"threshold", o.threshold},
                  {"occlusion_threshold", o.occlusion_threshold}});
  }
  std::vector<VideoReport> reports;
  std::vector<TableRow> rows;
  json videos = json::array();
  for (std::size_t i = 0; i < o.pred.size(); ++i) {
    const std::string name = video_name(o.pred[i]);
    const PredictionTriplet pred = read_prediction(o.pred[i]);
    const Annotation gt = read_annotation(o.gt[i]);
    check_pair(pred, gt, name);
    const VideoReport r = score_video(pred, gt.triplet, gt.labels, o.threshold, o.occlusion_threshold);
    json entry = to_json(r);
    entry["name"] = name;
    if (const auto manifest = read_manifest(o.pred[i])) entry["method"] = manifest->method;
    videos.push_back(std::move(entry));
    rows.push_back(table_row(name, r));
    reports.push_back(r);
  }
  const AggregateReport agg = aggregate(reports);
  rows.push_back(table_row("aggregate", agg));
  const json report = {{"threshold", o.threshold},
                       {"occlusion_threshold", o.occlusion_threshold},
                       {"videos", std::move(videos)},
                       {"aggregate", to_json(agg)}};
  if (!o.out.empty()) write_file_atomic(o.out, report.dump(2) + "\n");
  out << render_table(rows);
  return kExitOk;
}

// --- loss ----------------------------------------------------------------

int cmd_loss(const LossOptions& o, std::ostream& out) {
  LossConfig config;
  if (!o.config.empty()) config = read_loss_config(o.config);
  if (o.progress) {
    if (*o.progress < 0.0 || *o.progress > 1.0) throw UsageError("--progress must be in [0, 1]");
    config.bootstrap_k = bootstrap_schedule(*o.progress);
  }
  try {
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("loss config: ") + e.what());
  }
  if (o.print_config) {
    json c = {{"pred", o.pred}, {"gt", o.gt}, {"out", o.out}, {"loss", to_json(config)}};
    if (o.progress) c["progress"] = *o.progress;
    print_config(out, "loss", c);
  }
  const PredictionTriplet pred = read_prediction(o.pred);
  const Annotation gt = read_annotation(o.gt);
  check_pair(pred, gt, video_name(o.pred));
  const std::string text = to_json(total_loss(pred, gt.triplet, gt.labels, config)).dump(2) + "\n";
  if (!o.out.empty()) write_file_atomic(o.out, text);
  out << text;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Object-permanence ground truth: scenes, masks, labels, baselines, metrics and loss", "tcow"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Generate a scene JSON file");
  generate->require_subcommand(1);

  auto* container = generate->add_subcommand("container-script", "Drop a target into a container, then push it");
  add_common_generate(container, gen);
  {
    auto& c = gen.container;
    add_video_shape(container, c.frame_count, c.fps, c.width, c.height);
    container->add_option("--container-size", c.container_size, "Container outer width before the multiplier");
    container->add_option("--container-height", c.container_height, "Container height before the multiplier");
    container->add_option("--size-multiplier", c.size_multiplier, "Container enlargement factor");
    container->add_option("--wall-thickness", c.wall_thickness, "Container wall thickness");
    container->add_option("--target-size", c.target_size, "Target cube side");
    container->add_option("--pusher-size", c.pusher_size, "Pusher cube side");
    container->add_option("--pusher-speed", c.pusher_speed, "Pusher speed in m/s");
    container->add_option("--drop-height", c.drop_height, "Initial height of the target");
    container->add_option("--landing-time", c.landing_time, "Time the target lands in the container");
    container->add_option("--contact-time", c.contact_time, "Time the pusher reaches the container");
  }

  auto* clutter = generate->add_subcommand("random-clutter", "Static and ballistic boxes on a ground plane");
  add_common_generate(clutter, gen);
  {
    auto& c = gen.clutter;
    add_video_shape(clutter, c.frame_count, c.fps, c.width, c.height);
    clutter->add_option("--static", c.n_static, "Number of static objects")->check(CLI::NonNegativeNumber);
    clutter->add_option("--dynamic", c.n_dynamic, "Number of moving objects")->check(CLI::NonNegativeNumber);
    clutter->add_option("--arena", c.arena_half_size, "Half size of the placement area");
    clutter->add_option("--min-size", c.min_size, "Smallest box side");
    clutter->add_option("--max-size", c.max_size, "Largest box side");
    clutter->add_option("--open-box-probability", c.open_box_probability, "Chance of an open box")
        ->check(CLI::Range(0.0, 1.0));
  }

  auto* pass = generate->add_subcommand("occlusion-pass", "A flat target passing behind a wall");
  add_common_generate(pass, gen);
  {
    auto& c = gen.pass;
    add_video_shape(pass, c.frame_count, c.fps, c.width, c.height);
    pass->add_option("--mode", c.mode, "moving-target, sweeping-occluder or reversing-target")
        ->transform(CLI::CheckedTransformer(kPassModes, CLI::ignore_case));
    pass->add_option("--pixels-per-frame", c.pixels_per_frame, "Horizontal speed; 0 picks a seeded value");
    pass->add_option("--target-pixels", c.target_pixels, "Target side in pixels; 0 picks a seeded value");
    pass->add_option("--hidden-frames", c.hidden_frames, "Length of the full occlusion");
  }

  RenderOptions ren;
  auto* render = app.add_subcommand("render", "Rasterize visible and xray masks");
  render->add_option("--scene", ren.scene, "Scene JSON")->required();
  render->add_option("--out", ren.out, "Output directory")->required();
  render->add_flag("--cartoon", ren.cartoon, "Also write flat-colored PPM frames");
  render->add_option("--palette-seed", ren.palette_seed, "Seed of the cartoon palette");
  render->add_option("--jobs", ren.jobs, "Worker threads")->check(CLI::PositiveNumber);
  render->add_flag("--print-config", ren.print_config, "Print the resolved configuration");

  LabelCmdOptions lab;
  auto* label = app.add_subcommand("label", "Compute labels and the mask triplet of one target");
  label->add_option("--scene", lab.scene, "Scene JSON")->required();
  label->add_option("--masks", lab.masks, "Directory written by render")->required();
  label->add_option("--target", lab.target, "Target instance id")->required();
  label->add_option("--out", lab.out, "Output directory")->required();
  label->add_option("--seed", lab.seed, "Containment sampling seed")->envname("TCOW_SEED");
  label->add_option("--samples", lab.samples, "Containment samples per pair")->check(CLI::PositiveNumber);
  label->add_option("--occlusion-threshold", lab.thresholds.occlusion, "Invisible when o >= this")
      ->check(CLI::Range(0.0, 1.0));
  label->add_option("--containment-threshold", lab.thresholds.containment, "Contained when c >= this")
      ->check(CLI::Range(0.0, 1.0));
  label->add_option("--jobs", lab.jobs, "Worker threads")->check(CLI::PositiveNumber);
  label->add_flag("--print-config", lab.print_config, "Print the resolved configuration");

  BaselineOptions base;
  auto* baseline = app.add_subcommand("baseline", "Run a heuristic baseline on an annotation");
  baseline->add_option("--method", base.method, "copy-query, static-mask, linear-extrapolation or jump-to-occluder")
      ->required();
  baseline->add_option("--annotation", base.annotation, "Directory written by label")->required();
  baseline->add_option("--masks", base.masks, "Directory written by render");
  baseline->add_option("--out", base.out, "Output directory")->required();
  baseline->add_option("--occlusion-threshold", base.occlusion_threshold, "Invisible when o >= this")
      ->check(CLI::Range(0.0, 1.0));
  baseline->add_flag("--print-config", base.print_config, "Print the resolved configuration");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Score predictions against annotations");
  eval->add_option("--pred", ev.pred, "Prediction directory or triplet file (repeatable)")->required();
  eval->add_option("--gt", ev.gt, "Annotation directory (repeatable, paired with --pred)")->required();
  eval->add_option("--out", ev.out, "Report JSON path");
  eval->add_option("--threshold", ev.threshold, "Binarization threshold")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--occlusion-threshold", ev.occlusion_threshold, "Invisible when o >= this")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_flag("--print-config", ev.print_config, "Print the resolved configuration");

  LossOptions los;
  auto* loss = app.add_subcommand("loss", "Per-term training loss of a prediction");
  loss->add_option("--pred", los.pred, "Prediction directory or triplet file")->required();
  loss->add_option("--gt", los.gt, "Annotation directory")->required();
  loss->add_option("--config", los.config, "Loss config JSON");
  loss->add_option("--progress", los.progress, "Training progress; sets k from the schedule");
  loss->add_option("--out", los.out, "Breakdown JSON path");
  loss->add_flag("--print-config", los.print_config, "Print the resolved configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      for (auto* sub : {container, clutter, pass}) {
        if (sub->parsed()) return cmd_generate(sub->get_name(), gen, out);
      }
    }
    if (render->parsed()) return cmd_render(ren, out);
    if (label->parsed()) return cmd_label(lab, out);
    if (baseline->parsed()) return cmd_baseline(base, out);
    if (eval->parsed()) return cmd_eval(ev, out);
    if (loss->parsed()) return cmd_loss(los, out);
  } catch (const UsageError& e) {
    err << "tcow: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "tcow: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "tcow: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "tcow: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace tcow::cli
