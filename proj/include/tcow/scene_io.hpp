#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tcow/scene.hpp"

namespace tcow {

// Scene files are UTF-8 JSON:
//
//   {"frame_count": T, "fps": 12, "ground_plane": true,
//    "camera": {"width", "height", "fx", "fy", "cx", "cy",
//               "keyframes": [{"t", "position": [3], "quaternion": [w, x, y, z]}]},
//    "objects": [{"id", "mesh": {"kind", ...},
//                 "keyframes": [{"t", "position", "quaternion", "scale"}]}]}
//
// Mesh parameters: solid_box {"extents"}, open_box {"extents",
// "wall_thickness"}, tri_mesh {"vertices": [[3]], "triangles": [[3]]}.
// Unknown keys anywhere are rejected.

nlohmann::json scene_to_json(const SceneSpec& scene);
/// Throws DataError on schema violations and invalid scenes.
SceneSpec scene_from_json(const nlohmann::json& j);

std::string dump_scene(const SceneSpec& scene);
void write_scene(const std::filesystem::path& path, const SceneSpec& scene);
SceneSpec read_scene(const std::filesystem::path& path);

}  // namespace tcow
