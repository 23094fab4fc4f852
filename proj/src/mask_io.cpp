#include "tcow/mask_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>
#include <string>

#include "tcow/file_io.hpp"

namespace tcow {

namespace {

constexpr std::size_t kHeaderSize = 14;

void put_u16(std::vector<std::uint8_t>& out, int value) {
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
  out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xFF));
}

std::uint16_t get_u16(std::span<const std::uint8_t> bytes, std::size_t offset) {
  return static_cast<std::uint16_t>(bytes[offset] | (bytes[offset + 1] << 8));
}

void check_u16(int value, const char* what) {
  if (value < 0 || value > std::numeric_limits<std::uint16_t>::max()) {
    throw std::invalid_argument(std::string("tcmask: ") + what + " does not fit in u16");
  }
}

std::size_t row_bytes(int width) { return (static_cast<std::size_t>(width) + 7) / 8; }

void check_frames(std::span<const FrameMasks> frames) {
  if (frames.empty()) throw std::invalid_argument("mask volume needs at least one frame");
  for (const FrameMasks& f : frames) {
    if (f.num_instances() != frames.front().num_instances() || f.height() != frames.front().height() ||
        f.width() != frames.front().width()) {
      throw std::invalid_argument("mask volume frames differ in shape");
    }
  }
}

}  // namespace

MaskVolume visible_volume(std::span<const FrameMasks> frames) {
  check_frames(frames);
  MaskVolume v;
  v.kind = MaskKind::visible;
  v.num_planes = frames.front().num_instances();
  v.frames = static_cast<int>(frames.size());
  v.height = frames.front().height();
  v.width = frames.front().width();
  for (const FrameMasks& f : frames) v.grids.push_back(f.visible);
  return v;
}

MaskVolume xray_volume(std::span<const FrameMasks> frames) {
  check_frames(frames);
  MaskVolume v;
  v.kind = MaskKind::xray;
  v.num_planes = frames.front().num_instances();
  v.frames = static_cast<int>(frames.size());
  v.height = frames.front().height();
  v.width = frames.front().width();
  for (const FrameMasks& f : frames) v.planes.insert(v.planes.end(), f.xray.begin(), f.xray.end());
  return v;
}

MaskVolume triplet_volume(std::span<const BitPlane> target, std::span<const BitPlane> occluder,
                          std::span<const BitPlane> container) {
  if (target.empty() || target.size() != occluder.size() || target.size() != container.size()) {
    throw std::invalid_argument("triplet volume: channel lengths differ or are empty");
  }
  MaskVolume v;
  v.kind = MaskKind::triplet;
  v.num_planes = 3;
  v.frames = static_cast<int>(target.size());
  v.height = target.front().height();
  v.width = target.front().width();
  for (std::size_t t = 0; t < target.size(); ++t) {
    for (const BitPlane* p : {&target[t], &occluder[t], &container[t]}) {
      if (p->height() != v.height || p->width() != v.width) {
        throw std::invalid_argument("triplet volume: plane shapes differ");
      }
      v.planes.push_back(*p);
    }
  }
  return v;
}

std::vector<FrameMasks> frames_from_volumes(const MaskVolume& visible, const MaskVolume& xray) {
  if (visible.kind != MaskKind::visible || xray.kind != MaskKind::xray) {
    throw DataError("expected a visible (kind 0) and an xray (kind 1) mask file");
  }
  if (visible.frames != xray.frames || visible.num_planes != xray.num_planes || visible.height != xray.height ||
      visible.width != xray.width) {
    throw DataError("visible and xray mask files disagree in shape");
  }
  std::vector<FrameMasks> out;
  for (int t = 0; t < visible.frames; ++t) {
    FrameMasks f;
    f.frame_index = t;
    f.visible = visible.grids[static_cast<std::size_t>(t)];
    for (int k = 0; k < xray.num_planes; ++k) f.xray.push_back(xray.plane(t, k));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::uint8_t> encode_tcmask(const MaskVolume& v) {
  check_u16(v.num_planes, "K");
  check_u16(v.frames, "T");
  check_u16(v.height, "H");
  check_u16(v.width, "W");
  std::vector<std::uint8_t> out = {'T', 'C', 'M', 'K', kTcMaskVersion, static_cast<std::uint8_t>(v.kind)};
  put_u16(out, v.num_planes);
  put_u16(out, v.frames);
  put_u16(out, v.height);
  put_u16(out, v.width);

  if (v.kind == MaskKind::visible) {
    if (v.grids.size() != static_cast<std::size_t>(v.frames)) throw std::invalid_argument("tcmask: grid count");
    out.reserve(out.size() + 2 * static_cast<std::size_t>(v.frames) * static_cast<std::size_t>(v.height) *
                                 static_cast<std::size_t>(v.width));
    for (const IdGrid& g : v.grids) {
      if (g.height() != v.height || g.width() != v.width) throw std::invalid_argument("tcmask: grid shape");
      for (std::uint16_t id : g.data()) put_u16(out, id);
    }
    return out;
  }

  const std::size_t expected = static_cast<std::size_t>(v.frames) * static_cast<std::size_t>(v.num_planes);
  if (v.planes.size() != expected) throw std::invalid_argument("tcmask: plane count");
  const std::size_t stride = row_bytes(v.width);
  for (const BitPlane& p : v.planes) {
    if (p.height() != v.height || p.width() != v.width) throw std::invalid_argument("tcmask: plane shape");
    for (int y = 0; y < v.height; ++y) {
      const std::size_t row_start = out.size();
      out.resize(row_start + stride, 0);
      for (int x = 0; x < v.width; ++x) {
        if (p(y, x)) out[row_start + static_cast<std::size_t>(x / 8)] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      }
    }
  }
  return out;
}

MaskVolume decode_tcmask(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), "TCMK", 4) != 0) {
    throw DataError("not a tcmask file (bad magic)");
  }
  if (bytes[4] != kTcMaskVersion) throw DataError("unsupported tcmask version " + std::to_string(bytes[4]));
  if (bytes[5] > 2) throw DataError("unknown tcmask kind " + std::to_string(bytes[5]));

  MaskVolume v;
  v.kind = static_cast<MaskKind>(bytes[5]);
  v.num_planes = get_u16(bytes, 6);
  v.frames = get_u16(bytes, 8);
  v.height = get_u16(bytes, 10);
  v.width = get_u16(bytes, 12);
  const std::size_t pixels = static_cast<std::size_t>(v.height) * static_cast<std::size_t>(v.width);
  const auto payload = bytes.subspan(kHeaderSize);

  if (v.kind == MaskKind::visible) {
    if (payload.size() != 2 * pixels * static_cast<std::size_t>(v.frames)) {
      throw DataError("tcmask payload size mismatch");
    }
    std::size_t off = 0;
    for (int t = 0; t < v.frames; ++t) {
      IdGrid g(v.height, v.width);
      for (auto& id : g.data()) {
        id = get_u16(payload, off);
        if (id > v.num_planes) throw DataError("tcmask: instance id " + std::to_string(id) + " exceeds K");
        off += 2;
      }
      v.grids.push_back(std::move(g));
    }
    return v;
  }

  if (v.kind == MaskKind::triplet && v.num_planes != 3) throw DataError("triplet tcmask must have K = 3");
  const std::size_t stride = row_bytes(v.width);
  const std::size_t n_planes = static_cast<std::size_t>(v.frames) * static_cast<std::size_t>(v.num_planes);
  if (payload.size() != n_planes * stride * static_cast<std::size_t>(v.height)) {
    throw DataError("tcmask payload size mismatch");
  }
  std::size_t off = 0;
  for (std::size_t i = 0; i < n_planes; ++i) {
    BitPlane p(v.height, v.width);
    for (int y = 0; y < v.height; ++y) {
      for (int x = 0; x < v.width; ++x) {
        p(y, x) = (payload[off + static_cast<std::size_t>(x / 8)] >> (7 - x % 8)) & 1u;
      }
      off += stride;
    }
    v.planes.push_back(std::move(p));
  }
  return v;
}

void write_tcmask(const std::filesystem::path& path, const MaskVolume& volume) {
  write_file_atomic(path, encode_tcmask(volume));
}

MaskVolume read_tcmask(const std::filesystem::path& path) {
  try {
    return decode_tcmask(read_file_bytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Rle rle_encode(const BitPlane& mask) {
  Rle rle{mask.height(), mask.width(), {}};
  std::uint8_t current = 0;
  std::uint32_t run = 0;
  for (std::uint8_t v : mask.data()) {
    const std::uint8_t bit = v ? 1 : 0;
    if (bit != current) {
      rle.counts.push_back(run);
      run = 0;
      current = bit;
    }
    ++run;
  }
  rle.counts.push_back(run);
  return rle;
}

BitPlane rle_decode(const Rle& rle) {
  BitPlane mask(rle.height, rle.width);
  auto out = mask.data();
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (std::uint32_t run : rle.counts) {
    if (pos + run > out.size()) throw DataError("rle: runs exceed the mask size");
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), run, value);
    pos += run;
    value ^= 1u;
  }
  if (pos != out.size()) throw DataError("rle: runs do not cover the mask");
  return mask;
}

nlohmann::json rle_to_json(const Rle& rle) {
  return {{"size", {rle.height, rle.width}}, {"counts", rle.counts}};
}

Rle rle_from_json(const nlohmann::json& j) {
  try {
    Rle rle;
    rle.height = j.at("size").at(0).get<int>();
    rle.width = j.at("size").at(1).get<int>();
    rle.counts = j.at("counts").get<std::vector<std::uint32_t>>();
    return rle;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("rle: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    return tok;
  };
  if (token() != "P6") throw DataError("ppm: expected P6 magic");
  RgbImage img;
  try {
    img.width = std::stoi(token());
    img.height = std::stoi(token());
    if (std::stoi(token()) != 255) throw DataError("ppm: only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw DataError("ppm: malformed header");
  }
  ++pos;  // single whitespace after maxval
  const std::size_t n = 3 * static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  if (bytes.size() < pos || bytes.size() - pos != n) throw DataError("ppm: payload size mismatch");
  img.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  return img;
}

}  // namespace tcow
