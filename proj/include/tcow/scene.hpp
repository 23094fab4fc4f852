#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tcow/geometry.hpp"

namespace tcow {

enum class MeshKind { solid_box, open_box, tri_mesh };

const char* to_string(MeshKind kind);
MeshKind mesh_kind_from_string(const std::string& name);

using TriangleIndices = std::array<int, 3>;

/// Triangle mesh in the canonical object frame. Boxes are centered on the
/// origin; open boxes have no lid on their +z face.
class MeshPrimitive {
 public:
  /// Full extents along x, y, z.
  static MeshPrimitive solid_box(const Vec3& extents);
  /// Outer extents and wall thickness; the floor slab has the same
  /// thickness as the walls. Requires wall < min(extents.x, extents.y) / 2
  /// and wall < extents.z.
  static MeshPrimitive open_box(const Vec3& extents, double wall_thickness);
  static MeshPrimitive tri_mesh(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles);

  MeshKind kind() const { return kind_; }
  const Vec3& extents() const { return extents_; }
  double wall_thickness() const { return wall_thickness_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<TriangleIndices>& triangles() const { return triangles_; }

  /// Canonical-frame OBB: the vertex AABB with identity rotation.
  const Obb& local_obb() const { return local_obb_; }

  bool operator==(const MeshPrimitive& other) const;

 private:
  MeshPrimitive(MeshKind kind, Vec3 extents, double wall, std::vector<Vec3> vertices,
                std::vector<TriangleIndices> triangles);

  MeshKind kind_;
  Vec3 extents_;
  double wall_thickness_;
  std::vector<Vec3> vertices_;
  std::vector<TriangleIndices> triangles_;
  Obb local_obb_;
};

struct Keyframe {
  double time = 0.0;  // seconds
  Pose pose;

  bool operator==(const Keyframe&) const = default;
};

struct InstanceTrack {
  int id = 0;
  MeshPrimitive mesh;
  std::vector<Keyframe> keyframes;

  const Obb& obb_local() const { return mesh.local_obb(); }
};

/// Pinhole camera with OpenCV axes (x right, y down, z forward). Keyframe
/// poses are world-to-camera extrinsics: p_cam = orientation * p_world + position.
/// Pixel (x, y) has its center at (x + 0.5, y + 0.5).
struct CameraModel {
  int width = 480;
  int height = 360;
  double fx = 415.7;
  double fy = 415.7;
  double cx = 240.0;
  double cy = 180.0;
  std::vector<Keyframe> keyframes;

  /// Static camera at `eye` looking at `target`; `up` is the world up.
  /// fx = fy chosen from the horizontal field of view.
  static CameraModel look_at(int width, int height, double hfov_deg, const Vec3& eye, const Vec3& target,
                             const Vec3& up = Vec3::UnitZ());
};

struct SceneSpec {
  int frame_count = 1;
  double fps = 12.0;
  CameraModel camera;
  std::vector<InstanceTrack> objects;
  bool ground_plane = false;

  int num_instances() const { return static_cast<int>(objects.size()); }
  double frame_time(int t) const { return static_cast<double>(t) / fps; }
  /// Track with instance id `id`; throws std::out_of_range.
  const InstanceTrack& object(int id) const;
};

/// Throws std::invalid_argument describing the first violated invariant.
void validate(const SceneSpec& scene);

/// Piecewise interpolation (linear position/scale, slerp orientation),
/// held constant outside the keyframe range.
Pose pose_at(const std::vector<Keyframe>& keyframes, double time);
inline Pose pose_at(const InstanceTrack& track, double time) { return pose_at(track.keyframes, time); }
inline Pose pose_at(const SceneSpec& scene, int id, int frame) {
  return pose_at(scene.object(id), scene.frame_time(frame));
}

Obb world_obb(const InstanceTrack& track, double time);
inline Obb world_obb(const SceneSpec& scene, int id, int frame) {
  return world_obb(scene.object(id), scene.frame_time(frame));
}

/// Mesh vertices posed into the world frame.
std::vector<Vec3> world_vertices(const InstanceTrack& track, double time);

// ---------------------------------------------------------------------------
// Scripted generators. All motion is analytic and written out as keyframes.

inline constexpr double kGravity = 9.81;

/// One object drops into an open container, which is later shoved along
/// +x by a third box moving at constant velocity. Ids: 1 target,
/// 2 container, 3 pusher.
struct ContainerScriptConfig {
  int frame_count = 36;
  double fps = 12.0;
  int width = 480;
  int height = 360;
  double container_size = 1.0;    // lateral outer extent before the multiplier
  double container_height = 0.7;  // before the multiplier
  double size_multiplier = 1.5;
  double wall_thickness = 0.08;
  double target_size = 0.45;
  double pusher_size = 0.8;
  double pusher_speed = 3.0;  // m/s along +x
  double drop_height = 2.5;
  double landing_time = 0.75;  // s
  double contact_time = 1.5;   // s
};

/// Throws std::invalid_argument when the config is infeasible (e.g. the
/// target does not fit through the container opening).
SceneSpec gen_container_script(const ContainerScriptConfig& config, std::uint64_t seed);

/// Static objects resting on the ground plus ballistic objects that stop
/// on ground contact. Ids 1..n_static are static.
struct RandomClutterConfig {
  int n_static = 4;
  int n_dynamic = 2;
  int frame_count = 36;
  double fps = 12.0;
  int width = 480;
  int height = 360;
  double arena_half_size = 3.0;
  double min_size = 0.3;
  double max_size = 0.9;
  double open_box_probability = 0.3;
  double max_horizontal_speed = 2.0;
  double max_vertical_speed = 2.0;
};

SceneSpec gen_random_clutter(const RandomClutterConfig& config, std::uint64_t seed);

/// Flat target (id 1) and a wall occluder (id 2) seen head-on, no ground.
/// Horizontal motion is tuned to an integer number of pixels per frame.
enum class OcclusionPassMode {
  moving_target,      // target slides behind a static wall at constant velocity
  sweeping_occluder,  // static target, the wall sweeps across it
  reversing_target,   // like moving_target, but reverses mid-occlusion
};

struct OcclusionPassConfig {
  OcclusionPassMode mode = OcclusionPassMode::moving_target;
  int frame_count = 32;
  double fps = 12.0;
  int width = 160;
  int height = 120;
  int pixels_per_frame = 0;  // 0 picks a seeded value in [3, 5]
  int target_pixels = 0;     // target side in pixels; 0 picks a seeded value in [20, 30]
  int hidden_frames = 10;    // approximate length of the full occlusion
};

SceneSpec gen_occlusion_pass(const OcclusionPassConfig& config, std::uint64_t seed);

}  // namespace tcow
