#ifndef RAWSYNTH_PREVIEW_HPP
#define RAWSYNTH_PREVIEW_HPP

#include <filesystem>
#include <vector>

#include "rawsynth/frame.hpp"

namespace rawsynth {

/// 8-bit interleaved RGB raster.
struct RgbImage {
  std::vector<std::uint8_t> pixels;  // h*w*3
  int height = 0;
  int width = 0;
};

/// Minimal diagnostic ISP: digital gain, bilinear demosaic, gray-world
/// white balance, gamma 1/2.2. Input must be black-level-removed linear.
RgbImage render_rgb(const LinearFrame& frame, double digital_gain);

/// render_rgb + PNG emission.
void render_preview(const LinearFrame& frame, double digital_gain,
                    const std::filesystem::path& out);
void render_preview(const RawFrame& frame, double digital_gain,
                    const std::filesystem::path& out);

void write_png(const RgbImage& image, const std::filesystem::path& out);

}  // namespace rawsynth

#endif  // RAWSYNTH_PREVIEW_HPP
