#include "tcow/label.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "tcow/parallel.hpp"
#include "tcow/rng.hpp"

namespace tcow {

namespace {

void check_id(int k, int num_instances, const char* what) {
  if (k < 1 || k > num_instances) {
    throw std::out_of_range(std::string(what) + ": instance id " + std::to_string(k) + " out of range");
  }
}

}  // namespace

std::optional<double> occlusion_fraction(const FrameMasks& masks, int k) {
  check_id(k, masks.num_instances(), "occlusion_fraction");
  const std::size_t total = count(masks.xray_of(k));
  if (total == 0) return std::nullopt;
  std::size_t visible = 0;
  for (std::uint16_t id : masks.visible.data()) visible += (id == k);
  return static_cast<double>(total - std::min(visible, total)) / static_cast<double>(total);
}

std::optional<int> main_occluder(const FrameMasks& masks, int k, double threshold) {
  const auto o = occlusion_fraction(masks, k);
  if (!o || *o < threshold) return std::nullopt;

  std::vector<std::size_t> tally(static_cast<std::size_t>(masks.num_instances()) + 1, 0);
  const auto xray = masks.xray_of(k).data();
  const auto ids = masks.visible.data();
  for (std::size_t i = 0; i < xray.size(); ++i) {
    if (xray[i]) ++tally[ids[i]];
  }
  int best = 0;
  std::size_t best_count = 0;
  for (int l = 1; l <= masks.num_instances(); ++l) {
    if (l == k) continue;
    if (tally[static_cast<std::size_t>(l)] > best_count) {
      best = l;
      best_count = tally[static_cast<std::size_t>(l)];
    }
  }
  if (best_count == 0) return std::nullopt;
  return best;
}

std::optional<int> main_container(const ContainmentMatrix& c, int k, double threshold) {
  check_id(k, c.size(), "main_container");
  std::vector<int> candidates;
  for (int l = 1; l <= c.size(); ++l) {
    if (l != k && c.at(k, l) >= threshold) candidates.push_back(l);
  }
  if (candidates.empty()) return std::nullopt;

  int best = candidates.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (int li : candidates) {
    double score = 0.0;  // how much li is itself contained by another candidate
    for (int lj : candidates) {
      if (lj != li) score = std::max(score, c.at(li, lj));
    }
    if (score < best_score) {
      best = li;
      best_score = score;
    }
  }
  return best;
}

ContainmentMatrix containment_matrix(const SceneSpec& scene, int t, std::size_t samples, std::uint64_t seed) {
  const int n = scene.num_instances();
  std::vector<Obb> boxes;
  boxes.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) boxes.push_back(world_obb(scene, k, t));

  ContainmentMatrix m(n);
  for (int k = 1; k <= n; ++k) {
    for (int l = 1; l <= n; ++l) {
      if (k == l) continue;
      m.at(k, l) = containment_fraction(boxes[static_cast<std::size_t>(k - 1)], boxes[static_cast<std::size_t>(l - 1)],
                                        samples, derive_seed(seed, static_cast<std::uint64_t>(t),
                                                             static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l)));
    }
  }
  return m;
}

FrameLabel label_frame(const SceneSpec& scene, const FrameMasks& masks, const LabelOptions& options) {
  const int n = scene.num_instances();
  if (masks.num_instances() != n) throw std::invalid_argument("label_frame: masks and scene disagree on K");
  FrameLabel label;
  label.frame_index = masks.frame_index;
  label.containment = containment_matrix(scene, masks.frame_index, options.samples, options.seed);
  for (int k = 1; k <= n; ++k) {
    label.occlusion.push_back(occlusion_fraction(masks, k));
    label.main_occluder.push_back(main_occluder(masks, k, options.thresholds.occlusion));
    label.main_container.push_back(main_container(label.containment, k, options.thresholds.containment));
  }
  return label;
}

std::vector<FrameLabel> label_video(const SceneSpec& scene, std::span<const FrameMasks> masks,
                                    const LabelOptions& options) {
  if (static_cast<int>(masks.size()) != scene.frame_count) {
    throw std::invalid_argument("label_video: expected one FrameMasks per scene frame");
  }
  std::vector<FrameLabel> labels(masks.size());
  parallel_for(static_cast<int>(masks.size()), options.jobs, [&](int t) {
    labels[static_cast<std::size_t>(t)] = label_frame(scene, masks[static_cast<std::size_t>(t)], options);
  });
  return labels;
}

EventSummary summarize_events(std::span<const FrameLabel> labels, int k) {
  EventSummary summary;
  std::optional<Event> occl;
  std::optional<Event> cont;
  const int frames = static_cast<int>(labels.size());
  for (int t = 0; t < frames; ++t) {
    const FrameLabel& label = labels[static_cast<std::size_t>(t)];
    const auto occluder = label.occluder_of(k);
    const bool hidden = occluder.has_value();  // implies o >= threshold
    if (hidden && !occl) occl = Event{t, frames, *occluder};
    if (!hidden && occl) {
      occl->end = t;
      summary.occlusion.push_back(*occl);
      occl.reset();
    }
    const auto container = label.container_of(k);
    if (container && !cont) cont = Event{t, frames, *container};
    if (!container && cont) {
      cont->end = t;
      summary.containment.push_back(*cont);
      cont.reset();
    }
  }
  if (occl) summary.occlusion.push_back(*occl);
  if (cont) summary.containment.push_back(*cont);
  return summary;
}

AnnotationTriplet build_triplet(std::span<const FrameMasks> masks, std::span<const FrameLabel> labels,
                                int target_id) {
  if (masks.size() != labels.size()) throw std::invalid_argument("build_triplet: masks/labels length mismatch");
  AnnotationTriplet triplet;
  triplet.target_id = target_id;
  for (std::size_t t = 0; t < masks.size(); ++t) {
    const FrameMasks& m = masks[t];
    const FrameLabel& label = labels[t];
    const BitPlane empty(m.height(), m.width(), 0);
    triplet.target.push_back(m.xray_of(target_id));
    const auto occ = label.occluder_of(target_id);
    triplet.occluder.push_back(occ ? m.xray_of(*occ) : empty);
    const auto con = label.container_of(target_id);
    triplet.container.push_back(con ? m.xray_of(*con) : empty);
  }
  return triplet;
}

Annotation annotate(const SceneSpec& scene, std::span<const FrameMasks> masks, int target_id,
                    const LabelOptions& options) {
  check_id(target_id, scene.num_instances(), "annotate");
  if (masks.empty()) throw std::invalid_argument("annotate: no frames");
  query_mask(masks.front(), target_id);  // throws if not visible in frame 0

  Annotation out;
  out.labels = label_video(scene, masks, options);
  out.triplet = build_triplet(masks, out.labels, target_id);
  out.events = summarize_events(out.labels, target_id);
  return out;
}

double difficulty_score(std::span<const FrameLabel> labels, const SceneSpec& scene, int k) {
  check_id(k, scene.num_instances(), "difficulty_score");
  double occlusion_sum = 0.0;
  int defined = 0;
  for (const FrameLabel& label : labels) {
    if (const auto o = label.occlusion_of(k)) {
      occlusion_sum += *o;
      ++defined;
    }
  }
  const double mean_occlusion = defined > 0 ? occlusion_sum / defined : 0.0;

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  double path = 0.0;
  for (int t = 0; t < scene.frame_count; ++t) {
    for (int id = 1; id <= scene.num_instances(); ++id) {
      for (const Vec3& c : world_obb(scene, id, t).corners()) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
      }
    }
    if (t > 0) path += (world_obb(scene, k, t).center() - world_obb(scene, k, t - 1).center()).norm();
  }
  const double diagonal = (hi - lo).norm();
  return mean_occlusion + path / diagonal;
}

}  // namespace tcow
