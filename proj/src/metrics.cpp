#include "tcow/metrics.hpp"

#include <cstdio>
#include <stdexcept>

#include "tcow/file_io.hpp"

namespace tcow {

using nlohmann::json;

namespace {

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * *v);
  return buf;
}

}  // namespace

double frame_iou(const SoftPlane& pred, const BitPlane& gt, double threshold) {
  require_same_shape(pred, gt, "frame_iou");
  const auto p = pred.data();
  const auto g = gt.data();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool a = static_cast<double>(p[i]) >= threshold;
    const bool b = g[i] != 0;
    inter += (a && b);
    uni += (a || b);
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

VideoReport score_video(const PredictionTriplet& pred, const AnnotationTriplet& gt,
                        std::span<const FrameLabel> labels, double threshold, double occlusion_threshold) {
  const int frames = gt.frames();
  if (pred.frames() != frames || static_cast<int>(labels.size()) != frames || pred.occluder.size() != gt.occluder.size() ||
      pred.container.size() != gt.container.size()) {
    throw std::invalid_argument("score_video: prediction, ground truth and labels differ in length");
  }
  const int target = gt.target_id;
  Mean all, invis, occl, cont;
  for (int t = 0; t < frames; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const FrameLabel& label = labels[ts];
    const double j_t = frame_iou(pred.target[ts], gt.target[ts], threshold);
    all.add(j_t);
    if (label.invisible(target, occlusion_threshold)) invis.add(j_t);
    if (label.occluder_of(target)) occl.add(frame_iou(pred.occluder[ts], gt.occluder[ts], threshold));
    if (label.container_of(target)) cont.add(frame_iou(pred.container[ts], gt.container[ts], threshold));
  }
  VideoReport r;
  r.j_tgt_all = all.value();
  r.j_tgt_invis = invis.value();
  r.j_occl = occl.value();
  r.j_cont = cont.value();
  r.n_frames = static_cast<std::size_t>(frames);
  r.n_invis = invis.n;
  r.n_occl = occl.n;
  r.n_cont = cont.n;
  return r;
}

AggregateReport aggregate(std::span<const VideoReport> reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  Mean all, invis;
  double occl_sum = 0.0, cont_sum = 0.0;
  AggregateReport out;
  out.n_videos = reports.size();
  for (const VideoReport& r : reports) {
    if (r.j_tgt_all) all.add(*r.j_tgt_all);
    if (r.j_tgt_invis) invis.add(*r.j_tgt_invis);
    if (r.j_occl) {
      occl_sum += static_cast<double>(r.n_occl) * *r.j_occl;
      out.n_occl += r.n_occl;
    }
    if (r.j_cont) {
      cont_sum += static_cast<double>(r.n_cont) * *r.j_cont;
      out.n_cont += r.n_cont;
    }
    out.n_invis += r.n_invis;
  }
  out.j_tgt_all = all.value();
  out.j_tgt_invis = invis.value();
  if (out.n_occl > 0) out.j_occl = occl_sum / static_cast<double>(out.n_occl);
  if (out.n_cont > 0) out.j_cont = cont_sum / static_cast<double>(out.n_cont);
  return out;
}

json to_json(const VideoReport& r) {
  return {{"J_tgt_all", optional_json(r.j_tgt_all)},
          {"J_tgt_invis", optional_json(r.j_tgt_invis)},
          {"J_occl", optional_json(r.j_occl)},
          {"J_cont", optional_json(r.j_cont)},
          {"n_frames", r.n_frames},
          {"n_invis", r.n_invis},
          {"n_occl", r.n_occl},
          {"n_cont", r.n_cont}};
}

json to_json(const AggregateReport& r) {
  return {{"J_tgt_all", optional_json(r.j_tgt_all)},
          {"J_tgt_invis", optional_json(r.j_tgt_invis)},
          {"J_occl", optional_json(r.j_occl)},
          {"J_cont", optional_json(r.j_cont)},
          {"n_videos", r.n_videos},
          {"n_invis", r.n_invis},
          {"n_occl", r.n_occl},
          {"n_cont", r.n_cont}};
}

VideoReport video_report_from_json(const json& j) {
  try {
    VideoReport r;
    r.j_tgt_all = optional_from(j.at("J_tgt_all"));
    r.j_tgt_invis = optional_from(j.at("J_tgt_invis"));
    r.j_occl = optional_from(j.at("J_occl"));
    r.j_cont = optional_from(j.at("J_cont"));
    r.n_frames = j.at("n_frames").get<std::size_t>();
    r.n_invis = j.at("n_invis").get<std::size_t>();
    r.n_occl = j.at("n_occl").get<std::size_t>();
    r.n_cont = j.at("n_cont").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("report: ") + e.what());
  }
}

TableRow table_row(const std::string& name, const VideoReport& r) {
  return {name, r.j_tgt_all, r.j_tgt_invis, r.j_occl, r.j_cont};
}

TableRow table_row(const std::string& name, const AggregateReport& r) {
  return {name, r.j_tgt_all, r.j_tgt_invis, r.j_occl, r.j_cont};
}

std::string render_table(std::span<const TableRow> rows) {
  std::size_t name_w = 6;
  for (const TableRow& r : rows) name_w = std::max(name_w, r.name.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %11s  %13s  %8s  %8s\n", static_cast<int>(name_w), "Method", "J_tgt,all",
                "J_tgt,invis", "J_occl", "J_cont");
  out += line;
  for (const TableRow& r : rows) {
    std::snprintf(line, sizeof line, "%-*s  %11s  %13s  %8s  %8s\n", static_cast<int>(name_w), r.name.c_str(),
                  cell(r.j_tgt_all).c_str(), cell(r.j_tgt_invis).c_str(), cell(r.j_occl).c_str(),
                  cell(r.j_cont).c_str());
    out += line;
  }
  return out;
}

}  // namespace tcow
