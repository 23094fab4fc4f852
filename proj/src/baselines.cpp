#include "tcow/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tcow {

namespace {

void check_inputs(const AnnotationTriplet& gt, std::span<const FrameLabel> labels) {
  if (gt.target.empty()) throw std::invalid_argument("baseline: empty ground truth");
  if (static_cast<int>(labels.size()) != gt.frames()) {
    throw std::invalid_argument("baseline: labels and ground truth differ in length");
  }
}

SoftPlane empty_like(const BitPlane& mask) { return SoftPlane(mask.height(), mask.width(), 0.0f); }

PredictionTriplet target_only(std::vector<SoftPlane> target) {
  PredictionTriplet out;
  for (const SoftPlane& p : target) {
    out.occluder.emplace_back(p.height(), p.width(), 0.0f);
    out.container.emplace_back(p.height(), p.width(), 0.0f);
  }
  out.target = std::move(target);
  return out;
}

/// Shared loop of static_mask and linear_extrapolation. While hidden,
/// frame tau shows the mask of frame onset-1 shifted by
/// round((tau - (onset - 1)) * velocity).
template <typename VelocityFn>
PredictionTriplet hold_during_occlusion(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                                        double threshold, VelocityFn&& velocity_at_onset) {
  check_inputs(gt, labels);
  const int target = gt.target_id;
  std::vector<SoftPlane> out;
  std::optional<int> last_seen;  // frame whose mask is being held
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  bool hidden_before = false;
  for (int t = 0; t < gt.frames(); ++t) {
    const bool hidden = labels[static_cast<std::size_t>(t)].invisible(target, threshold);
    if (!hidden) {
      out.push_back(to_soft(gt.target[static_cast<std::size_t>(t)]));
      last_seen = t;
      hidden_before = false;
      continue;
    }
    if (!last_seen) {
      out.push_back(empty_like(gt.target[static_cast<std::size_t>(t)]));
      continue;
    }
    if (!hidden_before) velocity = velocity_at_onset(t);
    hidden_before = true;
    const double steps = static_cast<double>(t - *last_seen);
    const int dx = static_cast<int>(std::lround(steps * velocity.x()));
    const int dy = static_cast<int>(std::lround(steps * velocity.y()));
    out.push_back(to_soft(translate(gt.target[static_cast<std::size_t>(*last_seen)], dx, dy)));
  }
  return target_only(std::move(out));
}

}  // namespace

void validate(const PredictionTriplet& pred) {
  if (pred.target.empty() || pred.occluder.size() != pred.target.size() ||
      pred.container.size() != pred.target.size()) {
    throw std::invalid_argument("prediction: channels must have the same non-zero length");
  }
  const SoftPlane& ref = pred.target.front();
  for (const auto* channel : {&pred.target, &pred.occluder, &pred.container}) {
    for (const SoftPlane& p : *channel) {
      require_same_shape(ref, p, "prediction");
      for (float v : p.data()) {
        if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("prediction: values must lie in [0, 1]");
      }
    }
  }
}

PredictionTriplet prediction_from_annotation(const AnnotationTriplet& gt) {
  PredictionTriplet out;
  for (const BitPlane& p : gt.target) out.target.push_back(to_soft(p));
  for (const BitPlane& p : gt.occluder) out.occluder.push_back(to_soft(p));
  for (const BitPlane& p : gt.container) out.container.push_back(to_soft(p));
  return out;
}

std::optional<Eigen::Vector2d> centroid(const BitPlane& mask) {
  double sx = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(y, x)) {
        sx += x;
        sy += y;
        ++n;
      }
    }
  }
  if (n == 0) return std::nullopt;
  return Eigen::Vector2d(sx / static_cast<double>(n), sy / static_cast<double>(n));
}

BitPlane translate(const BitPlane& mask, int dx, int dy) {
  BitPlane out(mask.height(), mask.width(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    const int ty = y + dy;
    if (ty < 0 || ty >= mask.height()) continue;
    for (int x = 0; x < mask.width(); ++x) {
      const int tx = x + dx;
      if (tx >= 0 && tx < mask.width() && mask(y, x)) out(ty, tx) = 1;
    }
  }
  return out;
}

PredictionTriplet copy_query(const QueryMask& query, int frames) {
  if (frames < 1) throw std::invalid_argument("copy_query: frames must be >= 1");
  return target_only(std::vector<SoftPlane>(static_cast<std::size_t>(frames), to_soft(query.mask)));
}

PredictionTriplet static_mask(const AnnotationTriplet& gt, std::span<const FrameLabel> labels, double threshold) {
  return hold_during_occlusion(gt, labels, threshold, [](int) { return Eigen::Vector2d::Zero().eval(); });
}

PredictionTriplet linear_extrapolation(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                                       double threshold) {
  return hold_during_occlusion(gt, labels, threshold, [&](int onset) -> Eigen::Vector2d {
    if (onset < 2) return Eigen::Vector2d::Zero();
    const auto c1 = centroid(gt.target[static_cast<std::size_t>(onset - 1)]);
    const auto c2 = centroid(gt.target[static_cast<std::size_t>(onset - 2)]);
    if (!c1 || !c2) return Eigen::Vector2d::Zero();
    return *c1 - *c2;
  });
}

PredictionTriplet jump_to_occluder(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                                   std::span<const FrameMasks> masks, double threshold) {
  check_inputs(gt, labels);
  if (static_cast<int>(masks.size()) != gt.frames()) {
    throw std::invalid_argument("jump_to_occluder: masks and ground truth differ in length");
  }
  const int target = gt.target_id;
  PredictionTriplet out;
  bool lost = false;
  std::optional<int> tracked;
  for (int t = 0; t < gt.frames(); ++t) {
    const auto ts = static_cast<std::size_t>(t);
    const FrameLabel& label = labels[ts];
    const BitPlane& gt_target = gt.target[ts];
    if (!lost && label.invisible(target, threshold)) lost = true;
    if (!lost) {
      out.target.push_back(to_soft(gt_target));
      out.occluder.push_back(empty_like(gt_target));
    } else {
      if (!tracked) tracked = label.occluder_of(target);
      // Follow the chain of occluders; the visited list guards against cycles.
      std::vector<int> visited;
      while (tracked && label.invisible(*tracked, threshold)) {
        const auto next = label.occluder_of(*tracked);
        if (!next || std::find(visited.begin(), visited.end(), *next) != visited.end()) break;
        visited.push_back(*tracked);
        tracked = next;
      }
      out.target.push_back(empty_like(gt_target));
      out.occluder.push_back(tracked ? to_soft(masks[ts].xray_of(*tracked)) : empty_like(gt_target));
    }
    out.container.push_back(empty_like(gt_target));
  }
  return out;
}

const char* to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::copy_query:
      return "copy-query";
    case BaselineMethod::static_mask:
      return "static-mask";
    case BaselineMethod::linear_extrapolation:
      return "linear-extrapolation";
    case BaselineMethod::jump_to_occluder:
      return "jump-to-occluder";
  }
  return "unknown";
}

BaselineMethod baseline_from_string(const std::string& name) {
  for (auto m : {BaselineMethod::copy_query, BaselineMethod::static_mask, BaselineMethod::linear_extrapolation,
                 BaselineMethod::jump_to_occluder}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown baseline method '" + name + "'");
}

PredictionTriplet run_baseline(BaselineMethod method, const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                               std::span<const FrameMasks> masks, double threshold) {
  switch (method) {
    case BaselineMethod::copy_query:
      if (masks.empty()) throw std::invalid_argument("copy-query needs the frame-0 masks");
      return copy_query(query_mask(masks.front(), gt.target_id), gt.frames());
    case BaselineMethod::static_mask:
      return static_mask(gt, labels, threshold);
    case BaselineMethod::linear_extrapolation:
      return linear_extrapolation(gt, labels, threshold);
    case BaselineMethod::jump_to_occluder:
      return jump_to_occluder(gt, labels, masks, threshold);
  }
  throw std::invalid_argument("unknown baseline method");
}

}  // namespace tcow
