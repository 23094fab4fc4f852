#include "tcow/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tcow/rng.hpp"

namespace tcow {

void validate(const Pose& pose) {
  if (std::abs(pose.orientation.norm() - 1.0) > kQuaternionNormTolerance) {
    throw std::invalid_argument("pose orientation is not a unit quaternion (norm " +
                                std::to_string(pose.orientation.norm()) + ")");
  }
  if (!(pose.scale.array() > 0.0).all()) {
    throw std::invalid_argument("pose scale components must be strictly positive");
  }
  if (!pose.position.allFinite()) {
    throw std::invalid_argument("pose position must be finite");
  }
}

Obb::Obb(const Vec3& center, const Vec3& half_extents, const Quat& rotation)
    : center_(center), half_extents_(half_extents), rotation_(rotation) {
  if (!center.allFinite() || !half_extents.allFinite()) {
    throw std::invalid_argument("obb: non-finite center or extents");
  }
  if (!(half_extents.array() > kMinHalfExtent).all()) {
    throw std::invalid_argument("obb: degenerate half extents");
  }
  if (std::abs(rotation.norm() - 1.0) > kQuaternionNormTolerance) {
    throw std::invalid_argument("obb: rotation is not a unit quaternion");
  }
  rotation_.normalize();
  axes_ = rotation_.toRotationMatrix();
}

std::array<Vec3, 8> Obb::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 sign((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    out[static_cast<std::size_t>(i)] = to_world(sign.cwiseProduct(half_extents_));
  }
  return out;
}

Obb Obb::transformed(const Quat& rotation, const Vec3& translation) const {
  return Obb(rotation * center_ + translation, half_extents_, (rotation * rotation_).normalized());
}

double obb_volume(const Obb& box) {
  const Vec3& h = box.half_extents();
  return 8.0 * h.x() * h.y() * h.z();
}

namespace {

Vec3 inclusive_bounds(const Vec3& half_extents) {
  return half_extents.array() + kBoundarySlack * half_extents.maxCoeff();
}

}  // namespace

bool point_in_obb(const Vec3& p, const Obb& box) {
  const Vec3 local = box.to_local(p);
  return (local.cwiseAbs().array() <= inclusive_bounds(box.half_extents()).array()).all();
}

double containment_fraction(const Obb& containee, const Obb& container, std::size_t samples,
                            std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("containment_fraction: samples must be >= 1");
  if (containee == container) return 1.0;

  const double reach = (containee.center() - container.center()).norm();
  if (reach > containee.half_extents().norm() + container.half_extents().norm()) return 0.0;

  bool all_corners_inside = true;
  for (const Vec3& c : containee.corners()) {
    if (!point_in_obb(c, container)) {
      all_corners_inside = false;
      break;
    }
  }
  if (all_corners_inside) return 1.0;

  // containee-local -> container-local
  const Mat3 rel_rot = container.axes().transpose() * containee.axes();
  const Vec3 rel_shift = container.axes().transpose() * (containee.center() - container.center());
  const Vec3 h_in = containee.half_extents();
  const Vec3 h_out = inclusive_bounds(container.half_extents());

  const CounterRng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t base = 3 * static_cast<std::uint64_t>(i);
    const Vec3 local((2.0 * rng.uniform(base) - 1.0) * h_in.x(), (2.0 * rng.uniform(base + 1) - 1.0) * h_in.y(),
                     (2.0 * rng.uniform(base + 2) - 1.0) * h_in.z());
    const Vec3 q = rel_rot * local + rel_shift;
    hits += (std::abs(q.x()) <= h_out.x()) & (std::abs(q.y()) <= h_out.y()) & (std::abs(q.z()) <= h_out.z());
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace tcow
