#include "rawsynth/io.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace rawsynth {

namespace {

constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 28;  // incl. magic

void put_bytes(std::vector<std::uint8_t>& buf, const void* p, std::size_t n) {
  const auto* b = static_cast<const std::uint8_t*>(p);
  buf.insert(buf.end(), b, b + n);
}

template <typename T>
void put_le(std::vector<std::uint8_t>& buf, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), &v, sizeof(T));
  // host is little-endian on every supported target
  put_bytes(buf, raw.data(), raw.size());
}

template <typename T>
T get_le(const std::vector<std::uint8_t>& buf, std::size_t& pos,
         const std::filesystem::path& path) {
  if (pos + sizeof(T) > buf.size())
    throw TruncatedFile("truncated file: " + path.string());
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

template <typename Frame>
void apply_header(Frame& f, const detail::ContainerHeader& h) {
  f.height = int(h.height);
  f.width = int(h.width);
  f.cfa = Cfa(h.cfa);
  f.bit_depth = h.bit_depth;
  f.black_level = h.black_level;
  f.white_level = h.white_level;
  f.iso = h.iso;
  f.analog_gain = h.analog_gain;
}

template <typename Frame>
detail::ContainerHeader make_header(const Frame& f) {
  detail::ContainerHeader h;
  h.cfa = std::uint8_t(f.cfa);
  h.bit_depth = std::uint8_t(f.bit_depth);
  h.black_level = f.black_level;
  h.white_level = f.white_level;
  h.iso = f.iso;
  h.analog_gain = f.analog_gain;
  h.height = std::uint32_t(f.height);
  h.width = std::uint32_t(f.width);
  return h;
}

}  // namespace

namespace detail {

void write_container(const std::filesystem::path& path, const char magic[4],
                     const ContainerHeader& header, const void* payload,
                     std::size_t payload_bytes) {
  std::vector<std::uint8_t> buf;
  buf.reserve(kHeaderBytes + payload_bytes);
  put_bytes(buf, magic, 4);
  put_le(buf, kFormatVersion);
  put_le(buf, header.cfa);
  put_le(buf, header.bit_depth);
  put_le(buf, header.black_level);
  put_le(buf, header.white_level);
  put_le(buf, header.iso);
  put_le(buf, header.analog_gain);
  put_le(buf, header.height);
  put_le(buf, header.width);
  put_bytes(buf, payload, payload_bytes);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

ContainerHeader read_container(const std::filesystem::path& path, const char magic[4],
                               std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> data = slurp(path);
  if (data.size() < 4 || std::memcmp(data.data(), magic, 4) != 0)
    throw BadMagic("bad magic in " + path.string() + " (expected " +
                   std::string(magic, 4) + ")");
  std::size_t pos = 4;
  if (get_le<std::uint16_t>(data, pos, path) != kFormatVersion)
    throw IoError("unsupported container version in " + path.string());
  ContainerHeader h;
  h.cfa = get_le<std::uint8_t>(data, pos, path);
  h.bit_depth = get_le<std::uint8_t>(data, pos, path);
  h.black_level = get_le<std::uint16_t>(data, pos, path);
  h.white_level = get_le<std::uint16_t>(data, pos, path);
  h.iso = get_le<std::uint32_t>(data, pos, path);
  h.analog_gain = get_le<float>(data, pos, path);
  h.height = get_le<std::uint32_t>(data, pos, path);
  h.width = get_le<std::uint32_t>(data, pos, path);
  if (h.cfa > 3) throw IoError("invalid CFA code in " + path.string());
  payload.assign(data.begin() + std::ptrdiff_t(pos), data.end());
  return h;
}

}  // namespace detail

RawFrame read_rawb(const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload;
  detail::ContainerHeader h = detail::read_container(path, "RAWB", payload);
  RawFrame frame;
  apply_header(frame, h);
  std::size_t n = std::size_t(h.height) * h.width;
  if (payload.size() < n * sizeof(std::uint16_t))
    throw TruncatedFile("payload shorter than geometry: " + path.string());
  frame.pixels.resize(n);
  std::memcpy(frame.pixels.data(), payload.data(), n * sizeof(std::uint16_t));
  frame.validate();
  return frame;
}

void write_rawb(const RawFrame& frame, const std::filesystem::path& path) {
  frame.validate();
  detail::write_container(path, "RAWB", make_header(frame), frame.pixels.data(),
                          frame.pixels.size() * sizeof(std::uint16_t));
}

LinearFrame read_rawf(const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload;
  detail::ContainerHeader h = detail::read_container(path, "RAWF", payload);
  LinearFrame frame;
  apply_header(frame, h);
  std::size_t n = std::size_t(h.height) * h.width;
  if (payload.size() < n * sizeof(float))
    throw TruncatedFile("payload shorter than geometry: " + path.string());
  std::vector<float> values(n);
  std::memcpy(values.data(), payload.data(), n * sizeof(float));
  frame.values.assign(values.begin(), values.end());
  return frame;
}

void write_rawf(const LinearFrame& frame, const std::filesystem::path& path) {
  std::vector<float> payload(frame.values.begin(), frame.values.end());
  detail::write_container(path, "RAWF", make_header(frame), payload.data(),
                          payload.size() * sizeof(float));
}

RawFrame read_raw_with_sidecar(const std::filesystem::path& raw_path) {
  std::filesystem::path sidecar = raw_path;
  sidecar.replace_extension(".json");
  std::ifstream in(sidecar);
  if (!in) throw IoError("missing sidecar " + sidecar.string());
  nlohmann::json meta = nlohmann::json::parse(in);

  RawFrame frame;
  frame.cfa = cfa_from_name(meta.at("cfa").get<std::string>());
  frame.bit_depth = meta.at("bit_depth").get<int>();
  frame.black_level = meta.at("black_level").get<std::uint16_t>();
  frame.white_level = meta.at("white_level").get<std::uint16_t>();
  frame.iso = meta.at("iso").get<std::uint32_t>();
  frame.analog_gain = meta.at("analog_gain").get<float>();
  frame.height = meta.at("height").get<int>();
  frame.width = meta.at("width").get<int>();

  std::ifstream raw(raw_path, std::ios::binary);
  if (!raw) throw IoError("cannot open " + raw_path.string());
  frame.pixels.resize(std::size_t(frame.height) * frame.width);
  raw.read(reinterpret_cast<char*>(frame.pixels.data()),
           std::streamsize(frame.pixels.size() * sizeof(std::uint16_t)));
  if (raw.gcount() != std::streamsize(frame.pixels.size() * sizeof(std::uint16_t)))
    throw TruncatedFile("raster shorter than sidecar geometry: " + raw_path.string());
  frame.validate();
  return frame;
}

std::string file_digest(const std::filesystem::path& path) {
  std::vector<std::uint8_t> data = slurp(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace rawsynth
