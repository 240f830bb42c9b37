#include "rawsynth/frame.hpp"

#include <cmath>

namespace rawsynth {

const char* cfa_name(Cfa cfa) {
  switch (cfa) {
    case Cfa::RGGB: return "RGGB";
    case Cfa::BGGR: return "BGGR";
    case Cfa::GRBG: return "GRBG";
    case Cfa::GBRG: return "GBRG";
  }
  return "RGGB";
}

Cfa cfa_from_name(const std::string& name) {
  if (name == "RGGB") return Cfa::RGGB;
  if (name == "BGGR") return Cfa::BGGR;
  if (name == "GRBG") return Cfa::GRBG;
  if (name == "GBRG") return Cfa::GBRG;
  throw InvariantViolation("unknown CFA pattern: " + name);
}

int cfa_color_at(Cfa cfa, int row, int col) {
  // 0=R 1=G 2=B, 2x2 period
  static const int kPattern[4][4] = {
      {0, 1, 1, 2},  // RGGB
      {2, 1, 1, 0},  // BGGR
      {1, 0, 2, 1},  // GRBG
      {1, 2, 0, 1},  // GBRG
  };
  return kPattern[int(cfa)][(row & 1) * 2 + (col & 1)];
}

void RawFrame::validate() const {
  if (height <= 0 || width <= 0)
    throw InvariantViolation("frame dimensions must be positive");
  if (height % 2 != 0 || width % 2 != 0)
    throw InvariantViolation("frame dimensions must be even (full CFA periods)");
  if (pixels.size() != std::size_t(height) * width)
    throw InvariantViolation("pixel buffer size does not match geometry");
  if (bit_depth < 8 || bit_depth > 16)
    throw InvariantViolation("bit_depth must lie in [8,16]");
  const std::uint32_t max_code = (1u << bit_depth) - 1;
  if (black_level >= white_level || white_level > max_code)
    throw InvariantViolation("black/white levels inconsistent with bit depth");
  for (std::uint16_t v : pixels) {
    if (v > max_code)
      throw InvariantViolation("pixel value exceeds 2^bit_depth - 1");
  }
}

void SensorProfile::validate() const {
  if (!(0 < qe_lo && qe_lo <= qe_hypothesis && qe_hypothesis <= qe_hi && qe_hi < 1))
    throw InvariantViolation("QE bounds must satisfy 0 < qe_lo <= qe <= qe_hi < 1");
  if (base_iso <= 0) throw InvariantViolation("base_iso must be positive");
  if (bit_depth < 8 || bit_depth > 16)
    throw InvariantViolation("bit_depth must lie in [8,16]");
  if (black_level >= white_level)
    throw InvariantViolation("black_level must be below white_level");
}

LinearFrame to_linear(const RawFrame& frame) {
  LinearFrame out;
  out.height = frame.height;
  out.width = frame.width;
  out.cfa = frame.cfa;
  out.bit_depth = frame.bit_depth;
  out.black_level = frame.black_level;
  out.white_level = frame.white_level;
  out.iso = frame.iso;
  out.analog_gain = frame.analog_gain;
  out.values.resize(frame.pixels.size());
  for (std::size_t i = 0; i < frame.pixels.size(); ++i)
    out.values[i] = double(frame.pixels[i]) - double(frame.black_level);
  return out;
}

double round_half_away(double v) {
  return v >= 0 ? std::floor(v + 0.5) : std::ceil(v - 0.5);
}

RawFrame quantize(const LinearFrame& frame) {
  RawFrame out;
  out.height = frame.height;
  out.width = frame.width;
  out.cfa = frame.cfa;
  out.bit_depth = frame.bit_depth;
  out.black_level = frame.black_level;
  out.white_level = frame.white_level;
  out.iso = frame.iso;
  out.analog_gain = frame.analog_gain;
  out.pixels.resize(frame.values.size());
  const double white = frame.white_level;
  for (std::size_t i = 0; i < frame.values.size(); ++i) {
    double v = round_half_away(frame.values[i] + double(frame.black_level));
    if (v < 0) v = 0;
    if (v > white) v = white;
    out.pixels[i] = std::uint16_t(v);
  }
  return out;
}

}  // namespace rawsynth
