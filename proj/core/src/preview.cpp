#include "rawsynth/preview.hpp"

#include <algorithm>
#include <cmath>

#include <png.h>

namespace rawsynth {

RgbImage render_rgb(const LinearFrame& frame, double digital_gain) {
  if (!(digital_gain > 0)) throw InvariantViolation("digital gain must be positive");
  const int h = frame.height, w = frame.width;
  const double headroom = double(frame.white_level) - double(frame.black_level);

  // gained, clipped linear mosaic
  std::vector<double> mosaic(std::size_t(h) * w);
  for (std::size_t i = 0; i < mosaic.size(); ++i)
    mosaic[i] = std::clamp(frame.values[i] * digital_gain, 0.0, headroom);

  // bilinear demosaic: per channel, average the same-color sites in the
  // clamped 3x3 neighborhood (the site itself when colors match)
  std::vector<double> rgb(std::size_t(h) * w * 3, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        double sum = 0.0;
        int count = 0;
        if (cfa_color_at(frame.cfa, r, c) == ch) {
          sum = mosaic[std::size_t(r) * w + c];
          count = 1;
        } else {
          for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
              int rr = std::clamp(r + dr, 0, h - 1);
              int cc = std::clamp(c + dc, 0, w - 1);
              if (cfa_color_at(frame.cfa, rr, cc) == ch) {
                sum += mosaic[std::size_t(rr) * w + cc];
                ++count;
              }
            }
          }
        }
        rgb[(std::size_t(r) * w + c) * 3 + ch] = count ? sum / count : 0.0;
      }
    }
  }

  // gray-world white balance: scale R and B so their means match G's
  double means[3] = {0, 0, 0};
  for (std::size_t i = 0; i < std::size_t(h) * w; ++i)
    for (int ch = 0; ch < 3; ++ch) means[ch] += rgb[i * 3 + ch];
  double wb[3] = {1, 1, 1};
  if (means[0] > 0) wb[0] = means[1] / means[0];
  if (means[2] > 0) wb[2] = means[1] / means[2];

  RgbImage out;
  out.height = h;
  out.width = w;
  out.pixels.resize(std::size_t(h) * w * 3);
  const double inv_gamma = 1.0 / 2.2;
  for (std::size_t i = 0; i < std::size_t(h) * w; ++i) {
    for (int ch = 0; ch < 3; ++ch) {
      double v = std::clamp(rgb[i * 3 + ch] * wb[ch] / headroom, 0.0, 1.0);
      v = std::pow(v, inv_gamma);
      out.pixels[i * 3 + ch] = std::uint8_t(round_half_away(v * 255.0));
    }
  }
  return out;
}

void write_png(const RgbImage& image, const std::filesystem::path& out) {
  FILE* fp = std::fopen(out.string().c_str(), "wb");
  if (!fp) throw IoError("cannot open " + out.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    std::fclose(fp);
    throw IoError("PNG encoding failed for " + out.string());
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(image.width), png_uint_32(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r)
    png_write_row(png, const_cast<png_bytep>(
        image.pixels.data() + std::size_t(r) * image.width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void render_preview(const LinearFrame& frame, double digital_gain,
                    const std::filesystem::path& out) {
  write_png(render_rgb(frame, digital_gain), out);
}

void render_preview(const RawFrame& frame, double digital_gain,
                    const std::filesystem::path& out) {
  render_preview(to_linear(frame), digital_gain, out);
}

}  // namespace rawsynth
