#include "tcow/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tcow/rng.hpp"

namespace tcow {

namespace {

constexpr double kMinTriangleArea = 1e-12;

void append_box(const Vec3& lo, const Vec3& hi, std::vector<Vec3>& vertices,
                std::vector<TriangleIndices>& triangles) {
  const int base = static_cast<int>(vertices.size());
  for (int i = 0; i < 8; ++i) {
    vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  // Outward winding (counter-clockwise seen from outside).
  static constexpr std::array<TriangleIndices, 12> kFaces = {{
      {0, 2, 1}, {1, 2, 3},  // -z
      {4, 5, 6}, {5, 7, 6},  // +z
      {0, 1, 4}, {1, 5, 4},  // -y
      {2, 6, 3}, {3, 6, 7},  // +y
      {0, 4, 2}, {2, 4, 6},  // -x
      {1, 3, 5}, {3, 7, 5},  // +x
  }};
  for (const auto& f : kFaces) triangles.push_back({base + f[0], base + f[1], base + f[2]});
}

constexpr double kFlatMeshThickness = 1e-6;

Obb aabb_obb(const std::vector<Vec3>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("mesh has no vertices");
  Vec3 lo = vertices.front();
  Vec3 hi = vertices.front();
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  // flat meshes get a thin slab instead of a degenerate box
  const Vec3 half = 0.5 * (hi - lo);
  const double floor = std::max(kMinHalfExtent, kFlatMeshThickness * half.maxCoeff());
  return Obb(0.5 * (lo + hi), half.cwiseMax(floor));
}

Quat yaw(double angle) { return Quat(Eigen::AngleAxisd(angle, Vec3::UnitZ())); }

void check_increasing(const std::vector<Keyframe>& keyframes, const std::string& what) {
  if (keyframes.empty()) throw std::invalid_argument(what + ": no keyframes");
  for (std::size_t i = 1; i < keyframes.size(); ++i) {
    if (!(keyframes[i].time > keyframes[i - 1].time)) {
      throw std::invalid_argument(what + ": keyframe times must be strictly increasing");
    }
  }
}

}  // namespace

const char* to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::solid_box:
      return "solid_box";
    case MeshKind::open_box:
      return "open_box";
    case MeshKind::tri_mesh:
      return "tri_mesh";
  }
  return "unknown";
}

MeshKind mesh_kind_from_string(const std::string& name) {
  if (name == "solid_box") return MeshKind::solid_box;
  if (name == "open_box") return MeshKind::open_box;
  if (name == "tri_mesh") return MeshKind::tri_mesh;
  throw std::invalid_argument("unknown mesh kind '" + name + "'");
}

MeshPrimitive::MeshPrimitive(MeshKind kind, Vec3 extents, double wall, std::vector<Vec3> vertices,
                             std::vector<TriangleIndices> triangles)
    : kind_(kind),
      extents_(std::move(extents)),
      wall_thickness_(wall),
      vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      local_obb_(aabb_obb(vertices_)) {}

MeshPrimitive MeshPrimitive::solid_box(const Vec3& extents) {
  if (!(extents.array() > 0.0).all()) throw std::invalid_argument("solid_box: extents must be positive");
  std::vector<Vec3> vertices;
  std::vector<TriangleIndices> triangles;
  append_box(-0.5 * extents, 0.5 * extents, vertices, triangles);
  return MeshPrimitive(MeshKind::solid_box, extents, 0.0, std::move(vertices), std::move(triangles));
}

MeshPrimitive MeshPrimitive::open_box(const Vec3& extents, double wall) {
  if (!(extents.array() > 0.0).all()) throw std::invalid_argument("open_box: extents must be positive");
  if (!(wall > 0.0) || !(wall < 0.5 * std::min(extents.x(), extents.y())) || !(wall < extents.z())) {
    throw std::invalid_argument("open_box: wall thickness must be positive, below half the smallest "
                                "lateral extent and below the height");
  }
  const Vec3 h = 0.5 * extents;
  std::vector<Vec3> vertices;
  std::vector<TriangleIndices> triangles;
  const double floor_top = -h.z() + wall;
  append_box({-h.x(), -h.y(), -h.z()}, {h.x(), h.y(), floor_top}, vertices, triangles);
  append_box({-h.x(), -h.y(), floor_top}, {-h.x() + wall, h.y(), h.z()}, vertices, triangles);
  append_box({h.x() - wall, -h.y(), floor_top}, {h.x(), h.y(), h.z()}, vertices, triangles);
  append_box({-h.x() + wall, -h.y(), floor_top}, {h.x() - wall, -h.y() + wall, h.z()}, vertices, triangles);
  append_box({-h.x() + wall, h.y() - wall, floor_top}, {h.x() - wall, h.y(), h.z()}, vertices, triangles);
  return MeshPrimitive(MeshKind::open_box, extents, wall, std::move(vertices), std::move(triangles));
}

MeshPrimitive MeshPrimitive::tri_mesh(std::vector<Vec3> vertices, std::vector<TriangleIndices> triangles) {
  if (triangles.empty()) throw std::invalid_argument("tri_mesh: no triangles");
  const int n = static_cast<int>(vertices.size());
  for (const auto& tri : triangles) {
    for (int idx : tri) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("tri_mesh: triangle index out of range");
    }
    const Vec3& a = vertices[static_cast<std::size_t>(tri[0])];
    const Vec3& b = vertices[static_cast<std::size_t>(tri[1])];
    const Vec3& c = vertices[static_cast<std::size_t>(tri[2])];
    if (0.5 * (b - a).cross(c - a).norm() <= kMinTriangleArea) {
      throw std::invalid_argument("tri_mesh: degenerate triangle");
    }
  }
  const Vec3 extents = aabb_obb(vertices).half_extents() * 2.0;
  return MeshPrimitive(MeshKind::tri_mesh, extents, 0.0, std::move(vertices), std::move(triangles));
}

bool MeshPrimitive::operator==(const MeshPrimitive& other) const {
  return kind_ == other.kind_ && extents_ == other.extents_ && wall_thickness_ == other.wall_thickness_ &&
         vertices_ == other.vertices_ && triangles_ == other.triangles_;
}

CameraModel CameraModel::look_at(int width, int height, double hfov_deg, const Vec3& eye, const Vec3& target,
                                 const Vec3& up) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  Mat3 rot;
  rot.row(0) = right.transpose();
  rot.row(1) = down.transpose();
  rot.row(2) = forward.transpose();

  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fx = 0.5 * width / std::tan(0.5 * hfov_deg * std::numbers::pi / 180.0);
  cam.fy = cam.fx;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  Pose extrinsics;
  extrinsics.orientation = Quat(rot).normalized();
  extrinsics.position = -(extrinsics.orientation * eye);
  cam.keyframes.push_back({0.0, extrinsics});
  return cam;
}

const InstanceTrack& SceneSpec::object(int id) const {
  if (id < 1 || id > num_instances()) throw std::out_of_range("no instance with id " + std::to_string(id));
  return objects[static_cast<std::size_t>(id - 1)];
}

void validate(const SceneSpec& scene) {
  if (scene.frame_count < 1) throw std::invalid_argument("scene: frame_count must be >= 1");
  if (scene.frame_count > 65535) throw std::invalid_argument("scene: frame_count exceeds 65535");
  if (!(scene.fps > 0.0)) throw std::invalid_argument("scene: fps must be positive");
  if (scene.objects.empty()) throw std::invalid_argument("scene: at least one object is required");
  if (scene.objects.size() > 65535) throw std::invalid_argument("scene: too many objects");

  const CameraModel& cam = scene.camera;
  if (cam.width < 1 || cam.height < 1 || cam.width > 65535 || cam.height > 65535) {
    throw std::invalid_argument("camera: image size out of range");
  }
  if (!(cam.fx > 0.0) || !(cam.fy > 0.0)) throw std::invalid_argument("camera: focal lengths must be positive");
  if (!(cam.cx >= 0.0 && cam.cx < cam.width) || !(cam.cy >= 0.0 && cam.cy < cam.height)) {
    throw std::invalid_argument("camera: principal point outside the image");
  }
  check_increasing(cam.keyframes, "camera");
  for (const Keyframe& kf : cam.keyframes) validate(kf.pose);

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const InstanceTrack& track = scene.objects[i];
    const std::string what = "object " + std::to_string(track.id);
    if (track.id != static_cast<int>(i) + 1) {
      throw std::invalid_argument("scene: object ids must be 1..K in order (found " + std::to_string(track.id) +
                                  " at position " + std::to_string(i) + ")");
    }
    check_increasing(track.keyframes, what);
    for (const Keyframe& kf : track.keyframes) validate(kf.pose);
  }
}

Pose pose_at(const std::vector<Keyframe>& keyframes, double time) {
  if (keyframes.empty()) throw std::invalid_argument("pose_at: no keyframes");
  if (time <= keyframes.front().time) return keyframes.front().pose;
  if (time >= keyframes.back().time) return keyframes.back().pose;

  const auto next = std::upper_bound(keyframes.begin(), keyframes.end(), time,
                                     [](double t, const Keyframe& kf) { return t < kf.time; });
  const Keyframe& k1 = *next;
  const Keyframe& k0 = *(next - 1);
  if (k0.time == time) return k0.pose;

  const double s = (time - k0.time) / (k1.time - k0.time);
  Pose out;
  out.position = (1.0 - s) * k0.pose.position + s * k1.pose.position;
  out.scale = (1.0 - s) * k0.pose.scale + s * k1.pose.scale;
  out.orientation = k0.pose.orientation.slerp(s, k1.pose.orientation).normalized();
  return out;
}

Obb world_obb(const InstanceTrack& track, double time) {
  const Pose pose = pose_at(track, time);
  const Obb& local = track.obb_local();
  return Obb(pose.apply(local.center()), pose.scale.cwiseProduct(local.half_extents()),
             (pose.orientation * local.rotation()).normalized());
}

std::vector<Vec3> world_vertices(const InstanceTrack& track, double time) {
  const Pose pose = pose_at(track, time);
  const Mat3 rot = pose.orientation.toRotationMatrix();
  std::vector<Vec3> out;
  out.reserve(track.mesh.vertices().size());
  for (const Vec3& v : track.mesh.vertices()) out.push_back(pose.position + rot * pose.scale.cwiseProduct(v));
  return out;
}

// ---------------------------------------------------------------------------

SceneSpec gen_container_script(const ContainerScriptConfig& cfg, std::uint64_t seed) {
  if (cfg.frame_count < 1 || !(cfg.fps > 0.0)) throw std::invalid_argument("container-script: bad timing");
  if (!(cfg.size_multiplier > 0.0) || !(cfg.container_size > 0.0) || !(cfg.container_height > 0.0) ||
      !(cfg.target_size > 0.0) || !(cfg.pusher_size > 0.0)) {
    throw std::invalid_argument("container-script: sizes must be positive");
  }
  if (cfg.pusher_speed < 0.0) throw std::invalid_argument("container-script: pusher speed must be >= 0");
  const double cs = cfg.container_size * cfg.size_multiplier;
  const double ch = cfg.container_height * cfg.size_multiplier;
  const double wall = cfg.wall_thickness;
  const double opening = cs - 2.0 * wall;
  if (!(wall > 0.0) || !(wall < 0.5 * cs) || !(wall < ch)) {
    throw std::invalid_argument("container-script: wall thickness incompatible with container size");
  }
  if (cfg.target_size >= opening) {
    throw std::invalid_argument("container-script: target (" + std::to_string(cfg.target_size) +
                                ") does not fit through the container opening (" + std::to_string(opening) + ")");
  }
  if (!(cfg.landing_time > 0.0) || !(cfg.contact_time > cfg.landing_time)) {
    throw std::invalid_argument("container-script: need 0 < landing_time < contact_time");
  }
  if (!(cfg.drop_height > ch + cfg.target_size)) {
    throw std::invalid_argument("container-script: drop height must clear the container rim");
  }

  SeedStream rng(seed);
  const double end_time = (cfg.frame_count - 1) / cfg.fps;
  const Vec3 container_pos(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0.5 * ch);
  const double slack = std::max(0.0, 0.5 * (opening - cfg.target_size)) * 0.25;
  const Vec3 landing(container_pos.x() + rng.uniform(-slack, slack), container_pos.y() + rng.uniform(-slack, slack),
                     wall + 0.5 * cfg.target_size);
  const double drop_radius = rng.uniform(0.6, 1.2);
  const double drop_angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Vec3 start(landing.x() + drop_radius * std::cos(drop_angle), landing.y() + drop_radius * std::sin(drop_angle),
                   cfg.drop_height);

  const double v = cfg.pusher_speed;
  const bool pushed = v > 0.0 && cfg.contact_time < end_time;
  const double pusher_x0 = v > 0.0 ? container_pos.x() - 0.5 * cs - 0.5 * cfg.pusher_size - v * cfg.contact_time
                                   : container_pos.x() - 0.5 * cs - 0.5 * cfg.pusher_size - 1.0;
  const double push_shift = pushed ? v * (end_time - cfg.contact_time) : 0.0;

  SceneSpec scene;
  scene.frame_count = cfg.frame_count;
  scene.fps = cfg.fps;
  scene.ground_plane = true;

  // target: ballistic arc from `start` to `landing`, then rides with the container
  InstanceTrack target{1, MeshPrimitive::solid_box(Vec3::Constant(cfg.target_size)), {}};
  const double tl = cfg.landing_time;
  const Vec3 g(0.0, 0.0, -kGravity);
  const Vec3 v0 = (landing - start - 0.5 * g * tl * tl) / tl;
  for (int f = 0; f < cfg.frame_count; ++f) {
    const double time = f / cfg.fps;
    if (time >= tl) break;
    Pose p;
    p.position = start + v0 * time + 0.5 * g * time * time;
    target.keyframes.push_back({time, p});
  }
  {
    Pose p;
    p.position = landing;
    target.keyframes.push_back({tl, p});
    if (pushed) {
      target.keyframes.push_back({cfg.contact_time, p});
      p.position.x() += push_shift;
      target.keyframes.push_back({end_time, p});
    }
  }

  InstanceTrack container{2, MeshPrimitive::open_box(Vec3(cs, cs, ch), wall), {}};
  {
    Pose p;
    p.position = container_pos;
    container.keyframes.push_back({0.0, p});
    if (pushed) {
      container.keyframes.push_back({cfg.contact_time, p});
      p.position.x() += push_shift;
      container.keyframes.push_back({end_time, p});
    }
  }

  InstanceTrack pusher{3, MeshPrimitive::solid_box(Vec3::Constant(cfg.pusher_size)), {}};
  {
    Pose p;
    p.position = Vec3(pusher_x0, container_pos.y(), 0.5 * cfg.pusher_size);
    pusher.keyframes.push_back({0.0, p});
    if (v > 0.0 && end_time > 0.0) {
      p.position.x() += v * end_time;
      pusher.keyframes.push_back({end_time, p});
    }
  }

  const double x_min = std::min({pusher_x0 - 0.5 * cfg.pusher_size, start.x(), container_pos.x() - 0.5 * cs});
  const double x_max = std::max({container_pos.x() + push_shift + 0.5 * cs, start.x(), pusher_x0 + v * end_time});
  const double mid = 0.5 * (x_min + x_max);
  const double half_span = 0.5 * (x_max - x_min) + 0.5;
  const double distance = std::max(6.0, 1.1 * half_span / std::tan(std::numbers::pi / 6.0));
  scene.camera = CameraModel::look_at(cfg.width, cfg.height, 60.0,
                                      Vec3(mid, container_pos.y() - distance, 0.45 * distance),
                                      Vec3(mid, container_pos.y(), 0.6));

  scene.objects.push_back(std::move(target));
  scene.objects.push_back(std::move(container));
  scene.objects.push_back(std::move(pusher));
  validate(scene);
  return scene;
}

SceneSpec gen_random_clutter(const RandomClutterConfig& cfg, std::uint64_t seed) {
  if (cfg.n_static < 0 || cfg.n_dynamic < 0 || cfg.n_static + cfg.n_dynamic < 1) {
    throw std::invalid_argument("random-clutter: need at least one object");
  }
  if (cfg.frame_count < 1 || !(cfg.fps > 0.0)) throw std::invalid_argument("random-clutter: bad timing");
  if (!(cfg.min_size > 0.0) || cfg.max_size < cfg.min_size) {
    throw std::invalid_argument("random-clutter: bad size range");
  }

  SeedStream rng(seed);
  const double a = cfg.arena_half_size;
  const double end_time = (cfg.frame_count - 1) / cfg.fps;

  auto make_mesh = [&](Vec3& extents) {
    extents = Vec3(rng.uniform(cfg.min_size, cfg.max_size), rng.uniform(cfg.min_size, cfg.max_size),
                   rng.uniform(cfg.min_size, cfg.max_size));
    if (rng.bernoulli(cfg.open_box_probability)) {
      return MeshPrimitive::open_box(extents, 0.1 * std::min(extents.x(), extents.y()));
    }
    return MeshPrimitive::solid_box(extents);
  };

  SceneSpec scene;
  scene.frame_count = cfg.frame_count;
  scene.fps = cfg.fps;
  scene.ground_plane = true;

  const int total = cfg.n_static + cfg.n_dynamic;
  for (int i = 0; i < total; ++i) {
    Vec3 extents;
    MeshPrimitive mesh = make_mesh(extents);
    InstanceTrack track{i + 1, std::move(mesh), {}};
    const double half_height = 0.5 * extents.z();
    const double yaw0 = rng.uniform(-std::numbers::pi, std::numbers::pi);

    if (i < cfg.n_static) {
      Pose p;
      p.position = Vec3(rng.uniform(-a, a), rng.uniform(-a, a), half_height);
      p.orientation = yaw(yaw0);
      track.keyframes.push_back({0.0, p});
    } else {
      const Vec3 p0(rng.uniform(-0.8 * a, 0.8 * a), rng.uniform(-0.8 * a, 0.8 * a),
                    rng.uniform(half_height + 1.0, half_height + 3.0));
      const Vec3 vel(rng.uniform(-cfg.max_horizontal_speed, cfg.max_horizontal_speed),
                     rng.uniform(-cfg.max_horizontal_speed, cfg.max_horizontal_speed),
                     rng.uniform(0.0, cfg.max_vertical_speed));
      const double yaw_rate = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double drop = p0.z() - half_height;
      const double t_land = (vel.z() + std::sqrt(vel.z() * vel.z() + 2.0 * kGravity * drop)) / kGravity;

      auto state = [&](double time) {
        Pose p;
        p.position = p0 + vel * time;
        p.position.z() -= 0.5 * kGravity * time * time;
        p.orientation = yaw(yaw0 + yaw_rate * time);
        return p;
      };
      for (int f = 0; f < cfg.frame_count; ++f) {
        const double time = f / cfg.fps;
        if (time >= t_land) break;
        track.keyframes.push_back({time, state(time)});
      }
      if (t_land <= end_time || track.keyframes.empty()) {
        Pose landed = state(t_land);
        landed.position.z() = half_height;
        track.keyframes.push_back({t_land, landed});
      }
    }
    scene.objects.push_back(std::move(track));
  }

  scene.camera = CameraModel::look_at(cfg.width, cfg.height, 60.0, Vec3(0.0, -2.7 * a, 1.7 * a),
                                      Vec3(0.0, 0.0, 0.5));
  validate(scene);
  return scene;
}

SceneSpec gen_occlusion_pass(const OcclusionPassConfig& cfg, std::uint64_t seed) {
  if (cfg.frame_count < 8) throw std::invalid_argument("occlusion-pass: need at least 8 frames");
  if (cfg.pixels_per_frame < 0 || cfg.target_pixels < 0 || cfg.hidden_frames < 2) {
    throw std::invalid_argument("occlusion-pass: bad pixel or frame parameters");
  }
  SeedStream rng(seed);
  const int ppf = cfg.pixels_per_frame > 0 ? cfg.pixels_per_frame : rng.uniform_int(3, 5);
  const int side = cfg.target_pixels > 0 ? cfg.target_pixels : rng.uniform_int(20, 30);
  const int jitter = rng.uniform_int(-4, 4);

  constexpr double kTargetDepth = 10.0;
  constexpr double kWallDepth = 7.0;
  constexpr double kTargetThickness = 0.002;
  constexpr double kWallThickness = 0.2;

  SceneSpec scene;
  scene.frame_count = cfg.frame_count;
  scene.fps = cfg.fps;
  scene.ground_plane = false;
  scene.camera = CameraModel::look_at(cfg.width, cfg.height, 60.0, Vec3(0.0, -kTargetDepth, 0.0), Vec3::Zero());
  const CameraModel& cam = scene.camera;

  // Layout in pixels. Edges sit at quarter-pixel phases so pixel-center
  // coverage is stable under the small perspective effects of box depth.
  const double target_w = side + 0.5;
  const double left0 = 2.25;
  const double top = std::floor(cam.cy - 0.5 * target_w) + 0.25 + jitter;
  // the target's leading edge reaches the wall between frames 0 and 1
  const double wall_left = left0 + target_w + 0.5 * ppf;
  const double wall_width = target_w + ppf * (cfg.hidden_frames - 1) + 1.0;
  const double wall_top = top - 6.0;
  const double wall_height = target_w + 12.0;

  auto world_x = [&](double px, double depth) { return (px - cam.cx) * depth / cam.fx; };
  auto world_z = [&](double py, double depth) { return -(py - cam.cy) * depth / cam.fy; };
  auto target_center = [&](double left_px) {
    return Vec3(world_x(left_px + 0.5 * target_w, kTargetDepth), 0.0, world_z(top + 0.5 * target_w, kTargetDepth));
  };
  // wall front face at depth kWallDepth
  auto wall_center = [&](double left_px) {
    return Vec3(world_x(left_px + 0.5 * wall_width, kWallDepth), -kTargetDepth + kWallDepth + 0.5 * kWallThickness,
                world_z(wall_top + 0.5 * wall_height, kWallDepth));
  };
  const Vec3 target_extents(target_w * kTargetDepth / cam.fx, kTargetThickness, target_w * kTargetDepth / cam.fy);
  const Vec3 wall_extents(wall_width * kWallDepth / cam.fx, kWallThickness, wall_height * kWallDepth / cam.fy);

  const double end_time = (cfg.frame_count - 1) / cfg.fps;
  const double target_step = ppf * kTargetDepth / cam.fx;  // world units per frame
  const double wall_step = ppf * kWallDepth / cam.fx;
  const int last = cfg.frame_count - 1;

  InstanceTrack target{1, MeshPrimitive::solid_box(target_extents), {}};
  InstanceTrack wall{2, MeshPrimitive::solid_box(wall_extents), {}};
  auto key = [](double time, const Vec3& position) {
    Pose p;
    p.position = position;
    return Keyframe{time, p};
  };

  switch (cfg.mode) {
    case OcclusionPassMode::moving_target: {
      const Vec3 c0 = target_center(left0);
      target.keyframes.push_back(key(0.0, c0));
      target.keyframes.push_back(key(end_time, c0 + Vec3(target_step * last, 0.0, 0.0)));
      wall.keyframes.push_back(key(0.0, wall_center(wall_left)));
      break;
    }
    case OcclusionPassMode::reversing_target: {
      // turn around when centered behind the wall
      const double centered_left = wall_left + 0.5 * (wall_width - target_w);
      const int turn = std::clamp(static_cast<int>(std::lround((centered_left - left0) / ppf)), 1, last - 1);
      const Vec3 c0 = target_center(left0);
      target.keyframes.push_back(key(0.0, c0));
      target.keyframes.push_back(key(turn / cfg.fps, c0 + Vec3(target_step * turn, 0.0, 0.0)));
      target.keyframes.push_back(key(end_time, c0 + Vec3(target_step * (2 * turn - last), 0.0, 0.0)));
      wall.keyframes.push_back(key(0.0, wall_center(wall_left)));
      break;
    }
    case OcclusionPassMode::sweeping_occluder: {
      const double parked = std::floor(cam.cx - 0.5 * target_w) + 0.25;
      target.keyframes.push_back(key(0.0, target_center(parked)));
      // wall trailing edge reaches the target between frames 0 and 1
      const Vec3 w0 = wall_center(parked - 0.5 * ppf - wall_width);
      wall.keyframes.push_back(key(0.0, w0));
      wall.keyframes.push_back(key(end_time, w0 + Vec3(wall_step * last, 0.0, 0.0)));
      break;
    }
  }

  scene.objects.push_back(std::move(target));
  scene.objects.push_back(std::move(wall));
  validate(scene);
  return scene;
}

}  // namespace tcow
