#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "json.hpp"
#include "tcow/annotation_io.hpp"
#include "tcow/baselines.hpp"
#include "tcow/cli.hpp"
#include "tcow/file_io.hpp"
#include "tcow/geometry.hpp"
#include "tcow/label.hpp"
#include "tcow/loss.hpp"
#include "tcow/metrics.hpp"
#include "tcow/render.hpp"
#include "tcow/scene.hpp"
#include "tcow/scene_io.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

using namespace tcow;

// Scenes cross the boundary as JSON text.
SceneSpec parse_scene(const std::string& text) { return scene_from_json(json::parse(text)); }

py::dict to_dict(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

template <typename T>
py::array_t<T> stack(const std::vector<const Plane<T>*>& planes, std::vector<py::ssize_t> lead) {
  const int h = planes.empty() ? 0 : planes.front()->height();
  const int w = planes.empty() ? 0 : planes.front()->width();
  lead.push_back(h);
  lead.push_back(w);
  py::array_t<T> out(lead);
  T* dst = out.mutable_data();
  for (const Plane<T>* p : planes) dst = std::copy(p->data().begin(), p->data().end(), dst);
  return out;
}

template <typename T>
Plane<T> plane_from(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  Plane<T> p(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), p.data().begin());
  return p;
}

BitPlane bits_from(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
  BitPlane p = plane_from<std::uint8_t>(a);
  for (auto& v : p.data()) v = v != 0;
  return p;
}

Obb obb_from(const std::vector<double>& center, const std::vector<double>& half, const std::vector<double>& quat_wxyz) {
  if (center.size() != 3 || half.size() != 3 || quat_wxyz.size() != 4) {
    throw std::invalid_argument("obb: center and half extents need 3 values, the quaternion 4 (w, x, y, z)");
  }
  return Obb(Vec3(center[0], center[1], center[2]), Vec3(half[0], half[1], half[2]),
             Quat(quat_wxyz[0], quat_wxyz[1], quat_wxyz[2], quat_wxyz[3]));
}

py::tuple render(const std::string& scene_json, int jobs) {
  const SceneSpec scene = parse_scene(scene_json);
  const auto frames = rasterize_video(scene, jobs);
  std::vector<const IdGrid*> visible;
  std::vector<const BitPlane*> xray;
  for (const FrameMasks& f : frames) {
    visible.push_back(&f.visible);
    for (const BitPlane& p : f.xray) xray.push_back(&p);
  }
  const auto t = static_cast<py::ssize_t>(frames.size());
  return py::make_tuple(stack(visible, {t}), stack(xray, {t, scene.num_instances()}));
}

py::dict annotate_scene(const std::string& scene_json, int target, std::size_t samples, std::uint64_t seed, int jobs) {
  const SceneSpec scene = parse_scene(scene_json);
  const auto frames = rasterize_video(scene, jobs);
  const Annotation a = annotate(scene, frames, target, {samples, seed, {}, jobs});
  py::dict out = to_dict(annotation_to_json(a, difficulty_score(a.labels, scene, target)));
  std::vector<const BitPlane*> planes;
  for (int t = 0; t < a.triplet.frames(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    planes.insert(planes.end(), {&a.triplet.target[i], &a.triplet.occluder[i], &a.triplet.container[i]});
  }
  out["triplet"] = stack(planes, {a.triplet.frames(), 3});
  return out;
}

py::tuple run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tcow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_tcow, m) {
  m.doc() = "Object-permanence ground truth: scenes, masks, labels, metrics and loss";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "generate_container_script",
      [](std::uint64_t seed, int frames, int width, int height) {
        ContainerScriptConfig c;
        c.frame_count = frames;
        c.width = width;
        c.height = height;
        return dump_scene(gen_container_script(c, seed));
      },
      py::arg("seed") = 0, py::arg("frames") = 36, py::arg("width") = 480, py::arg("height") = 360,
      "Scene JSON of a target dropped into a container that is then pushed.");
  m.def(
      "generate_random_clutter",
      [](std::uint64_t seed, int n_static, int n_dynamic, int frames, int width, int height) {
        RandomClutterConfig c;
        c.n_static = n_static;
        c.n_dynamic = n_dynamic;
        c.frame_count = frames;
        c.width = width;
        c.height = height;
        return dump_scene(gen_random_clutter(c, seed));
      },
      py::arg("seed") = 0, py::arg("n_static") = 4, py::arg("n_dynamic") = 2, py::arg("frames") = 36,
      py::arg("width") = 480, py::arg("height") = 360, "Scene JSON of static and ballistic boxes.");
  m.def(
      "generate_occlusion_pass",
      [](std::uint64_t seed, const std::string& mode, int frames, int width, int height) {
        OcclusionPassConfig c;
        if (mode == "moving-target") c.mode = OcclusionPassMode::moving_target;
        else if (mode == "sweeping-occluder") c.mode = OcclusionPassMode::sweeping_occluder;
        else if (mode == "reversing-target") c.mode = OcclusionPassMode::reversing_target;
        else throw std::invalid_argument("unknown mode '" + mode + "'");
        c.frame_count = frames;
        c.width = width;
        c.height = height;
        return dump_scene(gen_occlusion_pass(c, seed));
      },
      py::arg("seed") = 0, py::arg("mode") = "moving-target", py::arg("frames") = 32, py::arg("width") = 160,
      py::arg("height") = 120, "Scene JSON of a target passing behind a wall.");

  m.def("render", &render, py::arg("scene"), py::arg("jobs") = 1,
        "Returns (visible ids [T, H, W] uint16, xray [T, K, H, W] uint8).");
  m.def("annotate", &annotate_scene, py::arg("scene"), py::arg("target"),
        py::arg("samples") = kDefaultContainmentSamples, py::arg("seed") = 0, py::arg("jobs") = 1,
        "Renders and labels one target; the annotation dict plus a [T, 3, H, W] triplet.");

  m.def(
      "containment_fraction",
      [](const std::vector<double>& a_center, const std::vector<double>& a_half, const std::vector<double>& a_quat,
         const std::vector<double>& b_center, const std::vector<double>& b_half, const std::vector<double>& b_quat,
         std::size_t samples, std::uint64_t seed) {
        return containment_fraction(obb_from(a_center, a_half, a_quat), obb_from(b_center, b_half, b_quat), samples,
                                    seed);
      },
      py::arg("containee_center"), py::arg("containee_half_extents"), py::arg("containee_rotation"),
      py::arg("container_center"), py::arg("container_half_extents"), py::arg("container_rotation"),
      py::arg("samples") = kDefaultContainmentSamples, py::arg("seed") = 0,
      "Fraction of the containee box inside the container box; rotations are (w, x, y, z).");

  using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
  using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
  m.def(
      "frame_iou", [](const FloatArray& pred, const ByteArray& gt, double threshold) {
        return frame_iou(plane_from<float>(pred), bits_from(gt), threshold);
      },
      py::arg("pred"), py::arg("gt"), py::arg("threshold") = kDefaultBinarizeThreshold);
  m.def(
      "bce", [](const FloatArray& pred, const ByteArray& gt, double weight) {
        return bce(plane_from<float>(pred), bits_from(gt), weight);
      },
      py::arg("pred"), py::arg("gt"), py::arg("weight") = 1.0);
  m.def(
      "bootstrapped_bce", [](const FloatArray& pred, const ByteArray& gt, double k, double weight) {
        return bootstrapped_bce(plane_from<float>(pred), bits_from(gt), k, weight);
      },
      py::arg("pred"), py::arg("gt"), py::arg("k"), py::arg("weight") = 1.0);
  m.def(
      "soft_jaccard", [](const FloatArray& pred, const ByteArray& gt, const std::string& surrogate) {
        if (surrogate != "min_max" && surrogate != "product") throw std::invalid_argument("surrogate: min_max or product");
        return soft_jaccard(plane_from<float>(pred), bits_from(gt),
                            surrogate == "min_max" ? JaccardSurrogate::min_max : JaccardSurrogate::product);
      },
      py::arg("pred"), py::arg("gt"), py::arg("surrogate") = "min_max");
  m.def("occlusion_weight", &occlusion_weight, py::arg("occlusion"), py::arg("beta") = 5.0);
  m.def("bootstrap_schedule", &bootstrap_schedule, py::arg("progress"));
  m.def("default_loss_config", [] { return to_dict(to_json(LossConfig{})); });

  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command line tool in-process; returns (code, stdout, stderr).");

  m.attr("OCCLUSION_THRESHOLD") = kOcclusionThreshold;
  m.attr("CONTAINMENT_THRESHOLD") = kContainmentThreshold;
}
