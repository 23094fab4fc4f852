#include "tcow/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tcow/parallel.hpp"
#include "tcow/rng.hpp"

namespace tcow {

namespace {

struct ScreenVertex {
  double x;
  double y;
  double inv_z;
};

double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Edge a->b of a triangle with positive edge() orientation, y pointing down.
bool top_left(const ScreenVertex& a, const ScreenVertex& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

bool covers(double w, bool is_top_left) { return w > 0.0 || (w == 0.0 && is_top_left); }

/// Calls emit(x, y, inv_z) for every pixel center covered by the triangle.
template <typename Emit>
void raster_triangle(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2, int width, int height, Emit&& emit) {
  double area = edge(v0, v1, v2.x, v2.y);
  if (area == 0.0 || !std::isfinite(area)) return;
  if (area < 0.0) {
    std::swap(v1, v2);
    area = -area;
  }
  const double min_x = std::min({v0.x, v1.x, v2.x});
  const double max_x = std::max({v0.x, v1.x, v2.x});
  const double min_y = std::min({v0.y, v1.y, v2.y});
  const double max_y = std::max({v0.y, v1.y, v2.y});
  const int x0 = static_cast<int>(std::ceil(std::clamp(min_x - 0.5, -1.0, static_cast<double>(width))));
  const int x1 = static_cast<int>(std::floor(std::clamp(max_x - 0.5, -1.0, static_cast<double>(width))));
  const int y0 = static_cast<int>(std::ceil(std::clamp(min_y - 0.5, -1.0, static_cast<double>(height))));
  const int y1 = static_cast<int>(std::floor(std::clamp(max_y - 0.5, -1.0, static_cast<double>(height))));

  const bool tl0 = top_left(v1, v2);
  const bool tl1 = top_left(v2, v0);
  const bool tl2 = top_left(v0, v1);
  const double inv_area = 1.0 / area;

  for (int y = std::max(y0, 0); y <= std::min(y1, height - 1); ++y) {
    const double py = y + 0.5;
    for (int x = std::max(x0, 0); x <= std::min(x1, width - 1); ++x) {
      const double px = x + 0.5;
      const double w0 = edge(v1, v2, px, py);
      if (!covers(w0, tl0)) continue;
      const double w1 = edge(v2, v0, px, py);
      if (!covers(w1, tl1)) continue;
      const double w2 = edge(v0, v1, px, py);
      if (!covers(w2, tl2)) continue;
      emit(x, y, (w0 * v0.inv_z + w1 * v1.inv_z + w2 * v2.inv_z) * inv_area);
    }
  }
}

/// Clips a camera-space triangle against z >= near and emits the screen
/// triangles of the resulting fan.
template <typename Emit>
void raster_camera_triangle(const CameraModel& cam, const Vec3& a, const Vec3& b, const Vec3& c, double near,
                            Emit&& emit) {
  std::array<Vec3, 4> poly;
  int n = 0;
  const std::array<const Vec3*, 3> in = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    const Vec3& p = *in[static_cast<std::size_t>(i)];
    const Vec3& q = *in[static_cast<std::size_t>((i + 1) % 3)];
    const bool p_in = p.z() >= near;
    const bool q_in = q.z() >= near;
    if (p_in) poly[static_cast<std::size_t>(n++)] = p;
    if (p_in != q_in) {
      const double s = (near - p.z()) / (q.z() - p.z());
      Vec3 r = p + s * (q - p);
      r.z() = near;
      poly[static_cast<std::size_t>(n++)] = r;
    }
  }
  if (n < 3) return;
  std::array<ScreenVertex, 4> sv;
  for (int i = 0; i < n; ++i) {
    const Vec3& p = poly[static_cast<std::size_t>(i)];
    const double iz = 1.0 / p.z();
    sv[static_cast<std::size_t>(i)] = {cam.fx * p.x() * iz + cam.cx, cam.fy * p.y() * iz + cam.cy, iz};
  }
  for (int i = 1; i + 1 < n; ++i) {
    raster_triangle(sv[0], sv[static_cast<std::size_t>(i)], sv[static_cast<std::size_t>(i + 1)], cam.width,
                    cam.height, emit);
  }
}

}  // namespace

Extrinsics extrinsics_at(const CameraModel& camera, double time) {
  const Pose pose = pose_at(camera.keyframes, time);
  return {pose.orientation.toRotationMatrix(), pose.position};
}

Projection project(const CameraModel& camera, double time, const Vec3& p_world, double near) {
  const Vec3 p = extrinsics_at(camera, time).to_camera(p_world);
  Projection out;
  out.depth = p.z();
  out.in_front = p.z() > near;
  if (out.in_front) {
    out.x = camera.fx * p.x() / p.z() + camera.cx;
    out.y = camera.fy * p.y() / p.z() + camera.cy;
  }
  return out;
}

const BitPlane& FrameMasks::xray_of(int id) const {
  if (id < 1 || id > num_instances()) throw std::out_of_range("no xray plane for id " + std::to_string(id));
  return xray[static_cast<std::size_t>(id - 1)];
}

FrameMasks rasterize_frame(const SceneSpec& scene, int t) {
  if (t < 0 || t >= scene.frame_count) throw std::out_of_range("rasterize_frame: frame out of range");
  const CameraModel& cam = scene.camera;
  const int width = cam.width;
  const int height = cam.height;
  const double time = scene.frame_time(t);
  const Extrinsics ext = extrinsics_at(cam, time);

  FrameMasks out;
  out.frame_index = t;
  out.visible = IdGrid(height, width, 0);
  std::vector<double> depth(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0);  // 1/z

  if (scene.ground_plane) {
    const Vec3 eye = -(ext.rotation.transpose() * ext.translation);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const Vec3 dir_cam((x + 0.5 - cam.cx) / cam.fx, (y + 0.5 - cam.cy) / cam.fy, 1.0);
        const Vec3 dir = ext.rotation.transpose() * dir_cam;
        if (dir.z() == 0.0) continue;
        const double s = -eye.z() / dir.z();
        if (s > kNearPlane && std::isfinite(s)) {
          depth[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = 1.0 / s;
        }
      }
    }
  }

  auto ids = out.visible.data();
  out.xray.reserve(scene.objects.size());
  std::vector<Vec3> cam_vertices;
  for (const InstanceTrack& track : scene.objects) {
    BitPlane xray(height, width, 0);
    auto bits = xray.data();
    const auto id = static_cast<std::uint16_t>(track.id);
    const std::vector<Vec3> world = world_vertices(track, time);
    cam_vertices.clear();
    for (const Vec3& v : world) cam_vertices.push_back(ext.to_camera(v));

    auto emit = [&](int x, int y, double inv_z) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
      bits[i] = 1;
      if (inv_z > depth[i]) {
        depth[i] = inv_z;
        ids[i] = id;
      }
    };
    for (const TriangleIndices& tri : track.mesh.triangles()) {
      raster_camera_triangle(cam, cam_vertices[static_cast<std::size_t>(tri[0])],
                             cam_vertices[static_cast<std::size_t>(tri[1])],
                             cam_vertices[static_cast<std::size_t>(tri[2])], kNearPlane, emit);
    }
    out.xray.push_back(std::move(xray));
  }
  return out;
}

std::vector<FrameMasks> rasterize_video(const SceneSpec& scene, int jobs) {
  std::vector<FrameMasks> frames(static_cast<std::size_t>(scene.frame_count));
  parallel_for(scene.frame_count, jobs,
               [&](int t) { frames[static_cast<std::size_t>(t)] = rasterize_frame(scene, t); });
  return frames;
}

std::vector<Rgb> cartoon_palette(std::uint64_t palette_seed, int num_instances) {
  std::vector<Rgb> palette{{0, 0, 0}};
  for (int id = 1; id <= num_instances; ++id) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      const CounterRng rng(derive_seed(palette_seed, static_cast<std::uint64_t>(id), attempt));
      Rgb c;
      for (std::uint64_t ch = 0; ch < 3; ++ch) c[ch] = static_cast<std::uint8_t>(32 + rng.bits(ch) % 224);
      if (std::find(palette.begin(), palette.end(), c) == palette.end()) {
        palette.push_back(c);
        break;
      }
    }
  }
  return palette;
}

RgbImage render_cartoon(const FrameMasks& masks, std::uint64_t palette_seed) {
  const std::vector<Rgb> palette = cartoon_palette(palette_seed, masks.num_instances());
  RgbImage img;
  img.width = masks.width();
  img.height = masks.height();
  img.rgb.resize(masks.visible.size() * 3);
  auto ids = masks.visible.data();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t id = ids[i];
    const Rgb& c = id < palette.size() ? palette[id] : palette[0];
    std::copy(c.begin(), c.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  return img;
}

QueryMask query_mask(const FrameMasks& first_frame, int target_id) {
  if (target_id < 1 || target_id > first_frame.num_instances()) {
    throw std::invalid_argument("query_mask: target id " + std::to_string(target_id) + " out of range");
  }
  QueryMask q{target_id, select(first_frame.visible, static_cast<std::uint16_t>(target_id))};
  if (!any(q.mask)) {
    throw std::invalid_argument("query_mask: target " + std::to_string(target_id) + " is not visible in frame " +
                                std::to_string(first_frame.frame_index));
  }
  return q;
}

}  // namespace tcow
