#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tcow/baselines.hpp"
#include "tcow/label.hpp"

namespace tcow {

// Annotation directory layout:
//   annotation.json  target id, events, per-frame target records (with
//                    RLE copies of the triplet planes) and full labels
//   triplet.tcmask   kind-2 (target, occluder, container) planes
//
// Prediction directory layout:
//   prediction.tcmask  kind-2 planes, binarized at 0.5
//   manifest.json      method name and parameters

inline constexpr const char* kAnnotationJson = "annotation.json";
inline constexpr const char* kTripletMask = "triplet.tcmask";
inline constexpr const char* kPredictionMask = "prediction.tcmask";
inline constexpr const char* kManifestJson = "manifest.json";
inline constexpr const char* kVisibleMask = "visible.tcmask";
inline constexpr const char* kXrayMask = "xray.tcmask";

nlohmann::json label_to_json(const FrameLabel& label);
FrameLabel label_from_json(const nlohmann::json& j);

nlohmann::json events_to_json(const EventSummary& events);
EventSummary events_from_json(const nlohmann::json& j);

/// `difficulty` is stored when given.
nlohmann::json annotation_to_json(const Annotation& annotation, std::optional<double> difficulty = std::nullopt);

void write_annotation(const std::filesystem::path& dir, const Annotation& annotation,
                      std::optional<double> difficulty = std::nullopt);
/// Throws DataError on missing or inconsistent files.
Annotation read_annotation(const std::filesystem::path& dir);

struct PredictionManifest {
  std::string method;
  int target_id = 0;
  nlohmann::json parameters = nlohmann::json::object();
};

void write_prediction(const std::filesystem::path& dir, const PredictionTriplet& pred,
                      const PredictionManifest& manifest);
/// `path` is a prediction directory, an annotation directory (its
/// ground-truth triplet is read as a perfect prediction) or a kind-2 file.
PredictionTriplet read_prediction(const std::filesystem::path& path);
std::optional<PredictionManifest> read_manifest(const std::filesystem::path& dir);

}  // namespace tcow
