#ifndef RAWSYNTH_FRAME_HPP
#define RAWSYNTH_FRAME_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rawsynth/errors.hpp"

namespace rawsynth {

/// 2x2 color filter array patterns, encoded as in the RAWB container.
enum class Cfa : std::uint8_t { RGGB = 0, BGGR = 1, GRBG = 2, GBRG = 3 };

const char* cfa_name(Cfa cfa);
Cfa cfa_from_name(const std::string& name);

/// Color of the CFA site at (row, col) for a given pattern: 0=R, 1=G, 2=B.
int cfa_color_at(Cfa cfa, int row, int col);

/// A single-plane Bayer mosaic of quantized digital numbers plus capture
/// metadata. Immutable by convention after construction; validate() enforces
/// the container invariants.
struct RawFrame {
  std::vector<std::uint16_t> pixels;  // row-major, height*width
  int height = 0;
  int width = 0;
  Cfa cfa = Cfa::RGGB;
  int bit_depth = 14;
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 0;
  std::uint32_t iso = 0;      // 0 = unknown
  float analog_gain = 0.0f;   // 0 = unknown

  std::uint16_t at(int r, int c) const { return pixels[std::size_t(r) * width + c]; }
  std::uint16_t& at(int r, int c) { return pixels[std::size_t(r) * width + c]; }

  /// Throws InvariantViolation if any container invariant is broken.
  void validate() const;
};

/// Real-valued frame in linear DN, typically post black-level subtraction.
/// Values may be negative.
struct LinearFrame {
  std::vector<double> values;  // row-major, height*width
  int height = 0;
  int width = 0;
  Cfa cfa = Cfa::RGGB;
  int bit_depth = 14;
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 0;
  std::uint32_t iso = 0;
  float analog_gain = 0.0f;

  double at(int r, int c) const { return values[std::size_t(r) * width + c]; }
  double& at(int r, int c) { return values[std::size_t(r) * width + c]; }
};

/// Per-sensor constants shared across the pipeline.
struct SensorProfile {
  std::string name = "generic";
  int base_iso = 100;          // ISO at analog gain 1
  double qe_lo = 0.30;
  double qe_hi = 0.70;
  double qe_hypothesis = 0.50;
  int bit_depth = 14;
  std::uint16_t black_level = 512;
  std::uint16_t white_level = 16383;
  Cfa cfa = Cfa::RGGB;

  void validate() const;
};

/// pixels - black_level as reals; metadata carried over.
LinearFrame to_linear(const RawFrame& frame);

/// Round half away from zero.
double round_half_away(double v);

/// values + black_level, rounded half away from zero, clamped to
/// [0, white_level], cast to u16.
RawFrame quantize(const LinearFrame& frame);

}  // namespace rawsynth

#endif  // RAWSYNTH_FRAME_HPP
