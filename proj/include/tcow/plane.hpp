#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcow {

/// Dense row-major H×W raster. Used for instance-id maps, boolean masks
/// (stored one byte per pixel, 0 or 1) and soft [0,1] predictions.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int height, int width, T fill = T{})
      : height_(height), width_(width) {
    if (height < 0 || width < 0) {
      throw std::invalid_argument("plane dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int y, int x) { return data_[index(y, x)]; }
  const T& operator()(int y, int x) const { return data_[index(y, x)]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

using BitPlane = Plane<std::uint8_t>;
using IdGrid = Plane<std::uint16_t>;
using SoftPlane = Plane<float>;

template <typename A, typename B>
bool same_shape(const Plane<A>& a, const Plane<B>& b) {
  return a.height() == b.height() && a.width() == b.width();
}

template <typename A, typename B>
void require_same_shape(const Plane<A>& a, const Plane<B>& b, const char* what) {
  if (!same_shape(a, b)) {
    throw std::invalid_argument(std::string(what) + ": plane shapes differ (" +
                                std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                                std::to_string(b.height()) + "x" + std::to_string(b.width()) + ")");
  }
}

std::size_t count(const BitPlane& mask);
bool any(const BitPlane& mask);

// Pixels where ids == id.
BitPlane select(const IdGrid& ids, std::uint16_t id);

SoftPlane to_soft(const BitPlane& mask);
BitPlane binarize(const SoftPlane& plane, double threshold);

// a ⊆ b
bool is_subset(const BitPlane& a, const BitPlane& b);

}  // namespace tcow
