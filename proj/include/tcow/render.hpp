#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tcow/plane.hpp"
#include "tcow/scene.hpp"

namespace tcow {

inline constexpr double kNearPlane = 1e-4;

struct Projection {
  double x = 0.0;  // continuous pixel coordinates; pixel (i, j) is centered at (i + 0.5, j + 0.5)
  double y = 0.0;
  double depth = 0.0;  // camera-frame z
  bool in_front = false;  // depth > near plane; x/y are meaningless otherwise
};

/// World-to-camera transform at `time`.
struct Extrinsics {
  Mat3 rotation;
  Vec3 translation;
  Vec3 to_camera(const Vec3& p) const { return rotation * p + translation; }
};
Extrinsics extrinsics_at(const CameraModel& camera, double time);

Projection project(const CameraModel& camera, double time, const Vec3& p_world, double near = kNearPlane);

/// visible: instance ids in [0, K], 0 is background or ground.
/// xray[k - 1]: coverage of instance k rendered alone.
struct FrameMasks {
  int frame_index = 0;
  IdGrid visible;
  std::vector<BitPlane> xray;

  int num_instances() const { return static_cast<int>(xray.size()); }
  int height() const { return visible.height(); }
  int width() const { return visible.width(); }
  const BitPlane& xray_of(int id) const;

  bool operator==(const FrameMasks&) const = default;
};

/// Z-buffered rasterization at pixel centers with a top-left fill rule and
/// a single near-plane clip. Equal depths resolve to the lower id; the
/// ground plane (when present) depth-competes as id 0 and has no xray.
FrameMasks rasterize_frame(const SceneSpec& scene, int t);

/// All frames; `jobs` > 1 renders frames on worker threads.
std::vector<FrameMasks> rasterize_video(const SceneSpec& scene, int jobs = 1);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  bool operator==(const RgbImage&) const = default;
};

using Rgb = std::array<std::uint8_t, 3>;

/// Deterministic palette for ids 1..K: pairwise-distinct, non-black colors.
/// Entry 0 is black. The color of id k depends only on the seed and ids <= k.
std::vector<Rgb> cartoon_palette(std::uint64_t palette_seed, int num_instances);

/// Flat-colored instance rendering with a black background.
RgbImage render_cartoon(const FrameMasks& masks, std::uint64_t palette_seed);

struct QueryMask {
  int target_id = 0;
  BitPlane mask;
};

/// Frame-0 visible pixels of `target_id`. Throws std::invalid_argument
/// when the id is out of range or the target is not visible.
QueryMask query_mask(const FrameMasks& first_frame, int target_id);

}  // namespace tcow
