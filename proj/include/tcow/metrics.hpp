#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "tcow/baselines.hpp"
#include "tcow/label.hpp"
#include "tcow/plane.hpp"

namespace tcow {

inline constexpr double kDefaultBinarizeThreshold = 0.5;

/// Jaccard index of the thresholded prediction (value >= threshold) and the
/// ground truth. Two empty masks score 1.
double frame_iou(const SoftPlane& pred, const BitPlane& gt, double threshold = kDefaultBinarizeThreshold);

struct VideoReport {
  std::optional<double> j_tgt_all;
  std::optional<double> j_tgt_invis;  // frames where the target is invisible
  std::optional<double> j_occl;       // frames with a main occluder
  std::optional<double> j_cont;       // frames with a main container
  std::size_t n_frames = 0;
  std::size_t n_invis = 0;
  std::size_t n_occl = 0;
  std::size_t n_cont = 0;

  bool operator==(const VideoReport&) const = default;
};

struct AggregateReport {
  std::optional<double> j_tgt_all;    // mean over videos
  std::optional<double> j_tgt_invis;  // mean over videos where defined
  std::optional<double> j_occl;       // weighted by n_occl
  std::optional<double> j_cont;       // weighted by n_cont
  std::size_t n_videos = 0;
  std::size_t n_invis = 0;
  std::size_t n_occl = 0;
  std::size_t n_cont = 0;

  bool operator==(const AggregateReport&) const = default;
};

VideoReport score_video(const PredictionTriplet& pred, const AnnotationTriplet& gt,
                        std::span<const FrameLabel> labels, double threshold = kDefaultBinarizeThreshold,
                        double occlusion_threshold = kOcclusionThreshold);

/// Throws std::invalid_argument on an empty list.
AggregateReport aggregate(std::span<const VideoReport> reports);

nlohmann::json to_json(const VideoReport& report);
nlohmann::json to_json(const AggregateReport& report);
VideoReport video_report_from_json(const nlohmann::json& j);

/// Fixed-width table with one row per entry, values in percent.
struct TableRow {
  std::string name;
  std::optional<double> j_tgt_all, j_tgt_invis, j_occl, j_cont;
};
std::string render_table(std::span<const TableRow> rows);
TableRow table_row(const std::string& name, const VideoReport& r);
TableRow table_row(const std::string& name, const AggregateReport& r);

}  // namespace tcow
