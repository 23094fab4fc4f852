#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tcow {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kQuaternionNormTolerance = 1e-6;
inline constexpr double kMinHalfExtent = 1e-9;
// Membership tests accept points this far (relative to the largest half
// extent) outside a face, so corners survive a world/local round trip.
inline constexpr double kBoundarySlack = 1e-12;
inline constexpr std::size_t kDefaultContainmentSamples = 100'000;

/// Rigid placement plus per-axis scale of an object's canonical frame.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec3 scale = Vec3::Ones();

  /// Maps a point from the canonical frame to the world frame.
  Vec3 apply(const Vec3& local) const { return position + orientation * scale.cwiseProduct(local); }

  bool operator==(const Pose& other) const {
    return position == other.position && orientation.coeffs() == other.orientation.coeffs() &&
           scale == other.scale;
  }
};

/// Throws std::invalid_argument unless the quaternion is unit (within
/// kQuaternionNormTolerance) and every scale component is positive.
void validate(const Pose& pose);

/// Oriented bounding box. Construction rejects degenerate extents and
/// non-unit rotations; the stored rotation is renormalized.
class Obb {
 public:
  Obb(const Vec3& center, const Vec3& half_extents, const Quat& rotation = Quat::Identity());

  const Vec3& center() const { return center_; }
  const Vec3& half_extents() const { return half_extents_; }
  const Quat& rotation() const { return rotation_; }
  /// Columns are the box axes in world coordinates.
  const Mat3& axes() const { return axes_; }

  /// Point expressed in the box frame (box center at origin, axis aligned).
  Vec3 to_local(const Vec3& p) const { return axes_.transpose() * (p - center_); }
  Vec3 to_world(const Vec3& local) const { return center_ + axes_ * local; }

  std::array<Vec3, 8> corners() const;

  /// Same box after the rigid motion p -> rotation * p + translation.
  Obb transformed(const Quat& rotation, const Vec3& translation) const;

  bool operator==(const Obb& other) const {
    return center_ == other.center_ && half_extents_ == other.half_extents_ &&
           rotation_.coeffs() == other.rotation_.coeffs();
  }

 private:
  Vec3 center_;
  Vec3 half_extents_;
  Quat rotation_;
  Mat3 axes_;
};

double obb_volume(const Obb& box);

/// Boundary inclusive.
bool point_in_obb(const Vec3& p, const Obb& box);

/// Monte Carlo estimate of |containee ∩ container| / |containee|.
///
/// Points are drawn uniformly in the containee's local frame from a
/// counter-based stream keyed by `seed`, so the i-th sample is the same
/// local point regardless of where the boxes sit in the world. Each sample
/// is tested against the container through the relative transform between
/// the two box frames. Two exact shortcuts skip sampling: disjoint
/// bounding spheres give 0 and a containee whose eight corners all lie in
/// the (convex) container gives 1. Identical boxes return exactly 1.
///
/// Throws std::invalid_argument when samples == 0.
double containment_fraction(const Obb& containee, const Obb& container,
                            std::size_t samples = kDefaultContainmentSamples, std::uint64_t seed = 0);

}  // namespace tcow
