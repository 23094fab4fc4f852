#include "tcow/annotation_io.hpp"

#include "tcow/file_io.hpp"
#include "tcow/mask_io.hpp"

namespace tcow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json parse_file(const fs::path& path) {
  try {
    return json::parse(read_file_text(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

json event_list(const std::vector<Event>& events) {
  json out = json::array();
  for (const Event& e : events) out.push_back({{"onset", e.onset}, {"end", e.end}, {"partner", e.partner}});
  return out;
}

std::vector<Event> event_list_from(const json& j) {
  std::vector<Event> out;
  for (const json& e : j) out.push_back({e.at("onset").get<int>(), e.at("end").get<int>(), e.at("partner").get<int>()});
  return out;
}

std::vector<BitPlane> binarized(const std::vector<SoftPlane>& planes) {
  std::vector<BitPlane> out;
  for (const SoftPlane& p : planes) out.push_back(binarize(p, 0.5));
  return out;
}

}  // namespace

json label_to_json(const FrameLabel& label) {
  json occlusion = json::array(), occluder = json::array(), container = json::array(), matrix = json::array();
  for (int k = 1; k <= label.num_instances(); ++k) {
    occlusion.push_back(optional_json(label.occlusion_of(k)));
    occluder.push_back(optional_json(label.occluder_of(k)));
    container.push_back(optional_json(label.container_of(k)));
    json row = json::array();
    for (int l = 1; l <= label.containment.size(); ++l) row.push_back(label.containment.at(k, l));
    matrix.push_back(std::move(row));
  }
  return {{"t", label.frame_index},
          {"occlusion", std::move(occlusion)},
          {"main_occluder", std::move(occluder)},
          {"main_container", std::move(container)},
          {"containment", std::move(matrix)}};
}

FrameLabel label_from_json(const json& j) try {
  FrameLabel label;
  label.frame_index = j.at("t").get<int>();
  const json& occlusion = j.at("occlusion");
  const int n = static_cast<int>(occlusion.size());
  label.containment = ContainmentMatrix(n);
  for (int k = 1; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    label.occlusion.push_back(optional_from<double>(occlusion.at(i)));
    label.main_occluder.push_back(optional_from<int>(j.at("main_occluder").at(i)));
    label.main_container.push_back(optional_from<int>(j.at("main_container").at(i)));
    for (int l = 1; l <= n; ++l) label.containment.at(k, l) = j.at("containment").at(i).at(static_cast<std::size_t>(l - 1)).get<double>();
  }
  return label;
} catch (const json::exception& e) {
  throw DataError(std::string("frame label: ") + e.what());
}

json events_to_json(const EventSummary& events) {
  return {{"occlusion_events", events.occlusion_events()},
          {"containment_events", events.containment_events()},
          {"occlusion", event_list(events.occlusion)},
          {"containment", event_list(events.containment)}};
}

EventSummary events_from_json(const json& j) try {
  return {event_list_from(j.at("occlusion")), event_list_from(j.at("containment"))};
} catch (const json::exception& e) {
  throw DataError(std::string("events: ") + e.what());
}

json annotation_to_json(const Annotation& a, std::optional<double> difficulty) {
  const int target = a.triplet.target_id;
  json frames = json::array();
  json labels = json::array();
  for (std::size_t t = 0; t < a.labels.size(); ++t) {
    const FrameLabel& label = a.labels[t];
    frames.push_back({{"t", label.frame_index},
                      {"occlusion_fraction", optional_json(label.occlusion_of(target))},
                      {"main_occluder", optional_json(label.occluder_of(target))},
                      {"main_container", optional_json(label.container_of(target))},
                      {"rle",
                       {{"target", rle_to_json(rle_encode(a.triplet.target[t]))},
                        {"occluder", rle_to_json(rle_encode(a.triplet.occluder[t]))},
                        {"container", rle_to_json(rle_encode(a.triplet.container[t]))}}}});
    labels.push_back(label_to_json(label));
  }
  json out = {{"target_id", target},
              {"events", events_to_json(a.events)},
              {"frames", std::move(frames)},
              {"frame_labels", std::move(labels)}};
  if (difficulty) out["difficulty"] = *difficulty;
  return out;
}

void write_annotation(const fs::path& dir, const Annotation& a, std::optional<double> difficulty) {
  fs::create_directories(dir);
  write_tcmask(dir / kTripletMask, triplet_volume(a.triplet.target, a.triplet.occluder, a.triplet.container));
  write_file_atomic(dir / kAnnotationJson, annotation_to_json(a, difficulty).dump(2) + "\n");
}

Annotation read_annotation(const fs::path& dir) {
  const json j = parse_file(dir / kAnnotationJson);
  const MaskVolume volume = read_tcmask(dir / kTripletMask);
  if (volume.kind != MaskKind::triplet) throw DataError((dir / kTripletMask).string() + ": expected a triplet file");
  Annotation a;
  try {
    a.triplet.target_id = j.at("target_id").get<int>();
    for (const json& l : j.at("frame_labels")) a.labels.push_back(label_from_json(l));
    a.events = events_from_json(j.at("events"));
  } catch (const json::exception& e) {
    throw DataError((dir / kAnnotationJson).string() + ": " + e.what());
  }
  if (static_cast<int>(a.labels.size()) != volume.frames) {
    throw DataError(dir.string() + ": annotation and triplet masks differ in frame count");
  }
  for (int t = 0; t < volume.frames; ++t) {
    a.triplet.target.push_back(volume.plane(t, 0));
    a.triplet.occluder.push_back(volume.plane(t, 1));
    a.triplet.container.push_back(volume.plane(t, 2));
  }
  return a;
}

void write_prediction(const fs::path& dir, const PredictionTriplet& pred, const PredictionManifest& manifest) {
  validate(pred);
  fs::create_directories(dir);
  write_tcmask(dir / kPredictionMask,
               triplet_volume(binarized(pred.target), binarized(pred.occluder), binarized(pred.container)));
  const json m = {{"method", manifest.method},
                  {"target_id", manifest.target_id},
                  {"frames", pred.frames()},
                  {"masks", kPredictionMask},
                  {"parameters", manifest.parameters}};
  write_file_atomic(dir / kManifestJson, m.dump(2) + "\n");
}

PredictionTriplet read_prediction(const fs::path& path) {
  fs::path file = path;
  if (fs::is_directory(path)) {
    file = fs::exists(path / kPredictionMask) ? path / kPredictionMask : path / kTripletMask;
  }
  const MaskVolume volume = read_tcmask(file);
  if (volume.kind != MaskKind::triplet) throw DataError(file.string() + ": expected a triplet file");
  PredictionTriplet pred;
  for (int t = 0; t < volume.frames; ++t) {
    pred.target.push_back(to_soft(volume.plane(t, 0)));
    pred.occluder.push_back(to_soft(volume.plane(t, 1)));
    pred.container.push_back(to_soft(volume.plane(t, 2)));
  }
  return pred;
}

std::optional<PredictionManifest> read_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir) || !fs::exists(dir / kManifestJson)) return std::nullopt;
  const json j = parse_file(dir / kManifestJson);
  try {
    return PredictionManifest{j.at("method").get<std::string>(), j.at("target_id").get<int>(), j.at("parameters")};
  } catch (const json::exception& e) {
    throw DataError((dir / kManifestJson).string() + ": " + e.what());
  }
}

}  // namespace tcow
