#ifndef RAWSYNTH_IO_HPP
#define RAWSYNTH_IO_HPP

#include <filesystem>
#include <string>

#include "rawsynth/frame.hpp"

namespace rawsynth {

// RAWB container, little-endian:
//   magic (4 bytes) | version u16 (=1) | cfa u8 | bit_depth u8 |
//   black_level u16 | white_level u16 | iso u32 | analog_gain f32 |
//   height u32 | width u32 | payload
// Magic "RAWB": payload height*width*u16 row-major.
// Magic "RAWF": same header, payload f32 (real-valued frames).
// Magic "DSHD": same header, payload f32 (dark-shading maps).

RawFrame read_rawb(const std::filesystem::path& path);
void write_rawb(const RawFrame& frame, const std::filesystem::path& path);

LinearFrame read_rawf(const std::filesystem::path& path);
void write_rawf(const LinearFrame& frame, const std::filesystem::path& path);

/// Reads a bare 16-bit little-endian raster whose metadata lives in a JSON
/// sidecar (same stem, ".json") carrying the RAWB header keys.
RawFrame read_raw_with_sidecar(const std::filesystem::path& raw_path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex chars.
std::string file_digest(const std::filesystem::path& path);

namespace detail {

/// Shared fixed-size container header (everything after the magic).
struct ContainerHeader {
  std::uint8_t cfa = 0;
  std::uint8_t bit_depth = 14;
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 0;
  std::uint32_t iso = 0;
  float analog_gain = 0.0f;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
};

void write_container(const std::filesystem::path& path, const char magic[4],
                     const ContainerHeader& header, const void* payload,
                     std::size_t payload_bytes);

/// Reads a container, checking the magic; returns header + payload bytes.
ContainerHeader read_container(const std::filesystem::path& path, const char magic[4],
                               std::vector<std::uint8_t>& payload);

}  // namespace detail

}  // namespace rawsynth

#endif  // RAWSYNTH_IO_HPP
