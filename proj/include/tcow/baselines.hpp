#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tcow/label.hpp"
#include "tcow/plane.hpp"
#include "tcow/render.hpp"

namespace tcow {

/// Per-frame (target, occluder, container) predictions in [0, 1].
struct PredictionTriplet {
  std::vector<SoftPlane> target;
  std::vector<SoftPlane> occluder;
  std::vector<SoftPlane> container;

  int frames() const { return static_cast<int>(target.size()); }

  bool operator==(const PredictionTriplet&) const = default;
};

/// Throws std::invalid_argument unless all channels have `frames` planes
/// of one shape with values in [0, 1].
void validate(const PredictionTriplet& pred);

PredictionTriplet prediction_from_annotation(const AnnotationTriplet& gt);

/// The query mask repeated over every frame.
PredictionTriplet copy_query(const QueryMask& query, int frames);

/// Perfect tracking while the target is visible or partially occluded;
/// during full occlusion, the last pre-occlusion xray mask is held in
/// place until the target re-emerges.
PredictionTriplet static_mask(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                              double threshold = kOcclusionThreshold);

/// Like static_mask, but the held mask moves with the centroid velocity
/// measured over the two frames preceding the occlusion. Occlusions
/// starting before frame 2 use zero velocity.
PredictionTriplet linear_extrapolation(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                                       double threshold = kOcclusionThreshold);

/// Perfect tracking up to the first full occlusion; from then on the
/// occluder channel follows the target's main occluder, switching to the
/// occluder's own main occluder whenever it becomes invisible. The target
/// channel is empty after the switch and the container channel is always
/// empty.
PredictionTriplet jump_to_occluder(const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                                   std::span<const FrameMasks> masks, double threshold = kOcclusionThreshold);

enum class BaselineMethod { copy_query, static_mask, linear_extrapolation, jump_to_occluder };

const char* to_string(BaselineMethod method);
BaselineMethod baseline_from_string(const std::string& name);

/// Dispatches to one of the methods above. `masks` is only read by
/// copy-query (frame 0) and jump-to-occluder.
PredictionTriplet run_baseline(BaselineMethod method, const AnnotationTriplet& gt, std::span<const FrameLabel> labels,
                               std::span<const FrameMasks> masks, double threshold = kOcclusionThreshold);

/// Unweighted mean pixel coordinate (x, y) of the mask.
std::optional<Eigen::Vector2d> centroid(const BitPlane& mask);

/// Shifts a mask by whole pixels; pixels shifted past the border are dropped.
BitPlane translate(const BitPlane& mask, int dx, int dy);

}  // namespace tcow
