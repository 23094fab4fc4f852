#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "tcow/plane.hpp"
#include "tcow/render.hpp"

namespace tcow {

// .tcmask container
//
//   offset  size  field
//   0       4     magic "TCMK"
//   4       1     version (1)
//   5       1     kind
//   6       2     K
//   8       2     T
//   10      2     H
//   12      2     W
//   14      ...   payload
//
// All integers little-endian. Kind 0 stores T*H*W u16 instance ids,
// row-major per frame. Kinds 1 and 2 store T*K bit planes in (t major,
// k minor) order; each row is packed 8 pixels per byte, most significant
// bit first, and padded to a whole byte. Kind 2 planes are the
// (target, occluder, container) triplet, so K = 3.

enum class MaskKind : std::uint8_t { visible = 0, xray = 1, triplet = 2 };

inline constexpr std::uint8_t kTcMaskVersion = 1;

struct MaskVolume {
  MaskKind kind = MaskKind::visible;
  int num_planes = 0;  // K
  int frames = 0;      // T
  int height = 0;
  int width = 0;
  std::vector<IdGrid> grids;    // kind 0: one per frame
  std::vector<BitPlane> planes; // kinds 1, 2: frames * num_planes, t major

  const BitPlane& plane(int t, int k) const {
    return planes[static_cast<std::size_t>(t) * static_cast<std::size_t>(num_planes) + static_cast<std::size_t>(k)];
  }

  bool operator==(const MaskVolume&) const = default;
};

MaskVolume visible_volume(std::span<const FrameMasks> frames);
MaskVolume xray_volume(std::span<const FrameMasks> frames);
/// Three sequences of equal length T.
MaskVolume triplet_volume(std::span<const BitPlane> target, std::span<const BitPlane> occluder,
                          std::span<const BitPlane> container);

/// Rebuilds per-frame masks from a kind-0 and a kind-1 volume of the same shape.
std::vector<FrameMasks> frames_from_volumes(const MaskVolume& visible, const MaskVolume& xray);

std::vector<std::uint8_t> encode_tcmask(const MaskVolume& volume);
/// Throws DataError on malformed input.
MaskVolume decode_tcmask(std::span<const std::uint8_t> bytes);

void write_tcmask(const std::filesystem::path& path, const MaskVolume& volume);
MaskVolume read_tcmask(const std::filesystem::path& path);

/// COCO-style uncompressed RLE, but scanned row-major: alternating run
/// lengths starting with a (possibly empty) run of zeros.
struct Rle {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  bool operator==(const Rle&) const = default;
};

Rle rle_encode(const BitPlane& mask);
BitPlane rle_decode(const Rle& rle);
nlohmann::json rle_to_json(const Rle& rle);
Rle rle_from_json(const nlohmann::json& j);

/// Binary PPM (P6, maxval 255).
std::vector<std::uint8_t> encode_ppm(const RgbImage& image);
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);

}  // namespace tcow
