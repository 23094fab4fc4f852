#include "tcow/plane.hpp"

#include <algorithm>

namespace tcow {

std::size_t count(const BitPlane& mask) {
  std::size_t n = 0;
  for (auto v : mask.data()) n += (v != 0);
  return n;
}

bool any(const BitPlane& mask) {
  const auto d = mask.data();
  return std::any_of(d.begin(), d.end(), [](std::uint8_t v) { return v != 0; });
}

BitPlane select(const IdGrid& ids, std::uint16_t id) {
  BitPlane out(ids.height(), ids.width());
  auto src = ids.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] == id);
  return out;
}

SoftPlane to_soft(const BitPlane& mask) {
  SoftPlane out(mask.height(), mask.width());
  auto src = mask.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 1.0f : 0.0f;
  return out;
}

BitPlane binarize(const SoftPlane& plane, double threshold) {
  BitPlane out(plane.height(), plane.width());
  auto src = plane.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (static_cast<double>(src[i]) >= threshold);
  return out;
}

bool is_subset(const BitPlane& a, const BitPlane& b) {
  require_same_shape(a, b, "is_subset");
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (da[i] && !db[i]) return false;
  }
  return true;
}

}  // namespace tcow
