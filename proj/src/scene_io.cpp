#include "tcow/scene_io.hpp"

#include <set>

#include "tcow/file_io.hpp"

namespace tcow {

using nlohmann::json;

namespace {

void expect_keys(const json& j, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional, const std::string& where) {
  if (!j.is_object()) throw DataError(where + ": expected an object");
  std::set<std::string> allowed;
  for (const char* k : required) {
    allowed.insert(k);
    if (!j.contains(k)) throw DataError(where + ": missing key '" + k + "'");
  }
  for (const char* k : optional) allowed.insert(k);
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) throw DataError(where + ": unknown key '" + item.key() + "'");
  }
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw DataError(where + ": expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Quat quat_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw DataError(where + ": expected a quaternion [w, x, y, z]");
  return Quat(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

json keyframe_json(const Keyframe& kf, bool with_scale) {
  const Quat& q = kf.pose.orientation;
  json j = {{"t", kf.time}, {"position", vec_json(kf.pose.position)}, {"quaternion", {q.w(), q.x(), q.y(), q.z()}}};
  if (with_scale) j["scale"] = vec_json(kf.pose.scale);
  return j;
}

Keyframe keyframe_from(const json& j, bool with_scale, const std::string& where) {
  if (with_scale) {
    expect_keys(j, {"t", "position", "quaternion", "scale"}, {}, where);
  } else {
    expect_keys(j, {"t", "position", "quaternion"}, {}, where);
  }
  Keyframe kf;
  kf.time = j.at("t").get<double>();
  kf.pose.position = vec_from(j.at("position"), where + ".position");
  kf.pose.orientation = quat_from(j.at("quaternion"), where + ".quaternion");
  if (with_scale) kf.pose.scale = vec_from(j.at("scale"), where + ".scale");
  return kf;
}

json mesh_json(const MeshPrimitive& mesh) {
  json j = {{"kind", to_string(mesh.kind())}};
  switch (mesh.kind()) {
    case MeshKind::solid_box:
      j["extents"] = vec_json(mesh.extents());
      break;
    case MeshKind::open_box:
      j["extents"] = vec_json(mesh.extents());
      j["wall_thickness"] = mesh.wall_thickness();
      break;
    case MeshKind::tri_mesh: {
      json verts = json::array();
      for (const Vec3& v : mesh.vertices()) verts.push_back(vec_json(v));
      j["vertices"] = std::move(verts);
      j["triangles"] = mesh.triangles();
      break;
    }
  }
  return j;
}

MeshPrimitive mesh_from(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) throw DataError(where + ": missing key 'kind'");
  const MeshKind kind = mesh_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case MeshKind::solid_box:
      expect_keys(j, {"kind", "extents"}, {}, where);
      return MeshPrimitive::solid_box(vec_from(j.at("extents"), where + ".extents"));
    case MeshKind::open_box:
      expect_keys(j, {"kind", "extents", "wall_thickness"}, {}, where);
      return MeshPrimitive::open_box(vec_from(j.at("extents"), where + ".extents"),
                                     j.at("wall_thickness").get<double>());
    case MeshKind::tri_mesh: {
      expect_keys(j, {"kind", "vertices", "triangles"}, {}, where);
      std::vector<Vec3> verts;
      for (const json& v : j.at("vertices")) verts.push_back(vec_from(v, where + ".vertices"));
      return MeshPrimitive::tri_mesh(std::move(verts), j.at("triangles").get<std::vector<TriangleIndices>>());
    }
  }
  throw DataError(where + ": unknown mesh kind");
}

}  // namespace

json scene_to_json(const SceneSpec& scene) {
  const CameraModel& cam = scene.camera;
  json cam_keys = json::array();
  for (const Keyframe& kf : cam.keyframes) cam_keys.push_back(keyframe_json(kf, false));
  json objects = json::array();
  for (const InstanceTrack& track : scene.objects) {
    json keys = json::array();
    for (const Keyframe& kf : track.keyframes) keys.push_back(keyframe_json(kf, true));
    objects.push_back({{"id", track.id}, {"mesh", mesh_json(track.mesh)}, {"keyframes", std::move(keys)}});
  }
  return {{"frame_count", scene.frame_count},
          {"fps", scene.fps},
          {"camera",
           {{"width", cam.width},
            {"height", cam.height},
            {"fx", cam.fx},
            {"fy", cam.fy},
            {"cx", cam.cx},
            {"cy", cam.cy},
            {"keyframes", std::move(cam_keys)}}},
          {"objects", std::move(objects)},
          {"ground_plane", scene.ground_plane}};
}

SceneSpec scene_from_json(const json& j) {
  try {
    expect_keys(j, {"frame_count", "fps", "camera", "objects", "ground_plane"}, {}, "scene");
    SceneSpec scene;
    scene.frame_count = j.at("frame_count").get<int>();
    scene.fps = j.at("fps").get<double>();
    scene.ground_plane = j.at("ground_plane").get<bool>();

    const json& c = j.at("camera");
    expect_keys(c, {"width", "height", "fx", "fy", "cx", "cy", "keyframes"}, {}, "camera");
    scene.camera.width = c.at("width").get<int>();
    scene.camera.height = c.at("height").get<int>();
    scene.camera.fx = c.at("fx").get<double>();
    scene.camera.fy = c.at("fy").get<double>();
    scene.camera.cx = c.at("cx").get<double>();
    scene.camera.cy = c.at("cy").get<double>();
    for (const json& kf : c.at("keyframes")) scene.camera.keyframes.push_back(keyframe_from(kf, false, "camera.keyframes"));

    for (const json& o : j.at("objects")) {
      expect_keys(o, {"id", "mesh", "keyframes"}, {}, "object");
      const std::string where = "object " + o.at("id").dump();
      InstanceTrack track{o.at("id").get<int>(), mesh_from(o.at("mesh"), where + ".mesh"), {}};
      for (const json& kf : o.at("keyframes")) track.keyframes.push_back(keyframe_from(kf, true, where + ".keyframes"));
      scene.objects.push_back(std::move(track));
    }
    validate(scene);
    return scene;
  } catch (const json::exception& e) {
    throw DataError(std::string("scene: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("scene: ") + e.what());
  }
}

std::string dump_scene(const SceneSpec& scene) { return scene_to_json(scene).dump(2) + "\n"; }

void write_scene(const std::filesystem::path& path, const SceneSpec& scene) {
  write_file_atomic(path, dump_scene(scene));
}

SceneSpec read_scene(const std::filesystem::path& path) {
  const std::string text = read_file_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return scene_from_json(j);
}

}  // namespace tcow
