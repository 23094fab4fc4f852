#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcow/geometry.hpp"
#include "tcow/plane.hpp"
#include "tcow/render.hpp"
#include "tcow/scene.hpp"

namespace tcow {

inline constexpr double kOcclusionThreshold = 0.95;
inline constexpr double kContainmentThreshold = 0.75;

struct Thresholds {
  double occlusion = kOcclusionThreshold;      // o >= this: invisible
  double containment = kContainmentThreshold;  // c >= this: contained
};

/// K×K containment fractions; at(k, l) is the fraction of k's box inside
/// l's box. The diagonal is unused and holds 1.
class ContainmentMatrix {
 public:
  ContainmentMatrix() = default;
  explicit ContainmentMatrix(int size) : size_(size), data_(static_cast<std::size_t>(size) * size, 0.0) {
    for (int i = 0; i < size; ++i) data_[index(i + 1, i + 1)] = 1.0;
  }

  int size() const { return size_; }
  double at(int containee, int container) const { return data_[index(containee, container)]; }
  double& at(int containee, int container) { return data_[index(containee, container)]; }

  bool operator==(const ContainmentMatrix&) const = default;

 private:
  std::size_t index(int k, int l) const {
    return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(l - 1);
  }
  int size_ = 0;
  std::vector<double> data_;
};

/// Ground truth for one frame, indexed by instance id - 1.
struct FrameLabel {
  int frame_index = 0;
  std::vector<std::optional<double>> occlusion;  // empty: out of frame
  ContainmentMatrix containment;
  std::vector<std::optional<int>> main_occluder;
  std::vector<std::optional<int>> main_container;

  int num_instances() const { return static_cast<int>(occlusion.size()); }
  std::optional<double> occlusion_of(int id) const { return occlusion[static_cast<std::size_t>(id - 1)]; }
  std::optional<int> occluder_of(int id) const { return main_occluder[static_cast<std::size_t>(id - 1)]; }
  std::optional<int> container_of(int id) const { return main_container[static_cast<std::size_t>(id - 1)]; }
  bool invisible(int id, double threshold = kOcclusionThreshold) const {
    const auto o = occlusion_of(id);
    return o && *o >= threshold;
  }

  bool operator==(const FrameLabel&) const = default;
};

/// 1 - visible/xray pixel ratio; nullopt when the xray mask is empty.
std::optional<double> occlusion_fraction(const FrameMasks& masks, int k);

/// The instance with the most visible pixels inside k's xray mask, if k
/// is invisible. Ties go to the lowest id; nullopt when nothing but
/// background, ground or the image border hides k.
std::optional<int> main_occluder(const FrameMasks& masks, int k, double threshold = kOcclusionThreshold);

/// Outermost container among {l : c(k, l) >= threshold}: the candidate
/// minimizing its largest containment fraction in any other candidate.
/// Ties go to the lowest id.
std::optional<int> main_container(const ContainmentMatrix& containment, int k,
                                  double threshold = kContainmentThreshold);
inline std::optional<int> main_container(const FrameLabel& label, int k,
                                         double threshold = kContainmentThreshold) {
  return main_container(label.containment, k, threshold);
}

struct LabelOptions {
  std::size_t samples = kDefaultContainmentSamples;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  int jobs = 1;
};

/// Pairwise containment at frame t. The sample stream of each ordered
/// pair is keyed by (seed, t, k, l), so the result depends only on the 3D
/// scene and not on the camera.
ContainmentMatrix containment_matrix(const SceneSpec& scene, int t, std::size_t samples, std::uint64_t seed);

FrameLabel label_frame(const SceneSpec& scene, const FrameMasks& masks, const LabelOptions& options);
std::vector<FrameLabel> label_video(const SceneSpec& scene, std::span<const FrameMasks> masks,
                                    const LabelOptions& options);

struct Event {
  int onset = 0;
  int end = 0;  // first frame after the event; T if still running
  int partner = 0;

  bool operator==(const Event&) const = default;
};

struct EventSummary {
  std::vector<Event> occlusion;
  std::vector<Event> containment;

  std::size_t occlusion_events() const { return occlusion.size(); }
  std::size_t containment_events() const { return containment.size(); }

  bool operator==(const EventSummary&) const = default;
};

/// Occlusion events start when k becomes invisible with a main occluder;
/// containment events start when k gains a main container. No hysteresis.
EventSummary summarize_events(std::span<const FrameLabel> labels, int k);

struct AnnotationTriplet {
  int target_id = 0;
  std::vector<BitPlane> target;
  std::vector<BitPlane> occluder;
  std::vector<BitPlane> container;

  int frames() const { return static_cast<int>(target.size()); }

  bool operator==(const AnnotationTriplet&) const = default;
};

struct Annotation {
  AnnotationTriplet triplet;
  std::vector<FrameLabel> labels;
  EventSummary events;
};

/// Builds labels for every frame and the (target, occluder, container)
/// mask triplet for `target_id`. Throws std::invalid_argument when the
/// target is not visible in frame 0.
Annotation annotate(const SceneSpec& scene, std::span<const FrameMasks> masks, int target_id,
                    const LabelOptions& options = {});

/// Triplet from precomputed labels.
AnnotationTriplet build_triplet(std::span<const FrameMasks> masks, std::span<const FrameLabel> labels, int target_id);

/// Mean defined occlusion fraction of k plus the path length of k's box
/// center divided by the diagonal of the region swept by all boxes.
double difficulty_score(std::span<const FrameLabel> labels, const SceneSpec& scene, int k);

}  // namespace tcow
