#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cobot/error.hpp"
#include "cobot/geometry.hpp"

namespace cobot {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB raster.
class RasterImage {
 public:
  RasterImage(int width, int height, Rgb fill = {});
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Binary P6 PPM with maxval 255.
void write_ppm(std::ostream& out, const RasterImage& img);
std::string encode_ppm(const RasterImage& img);
RasterImage read_ppm(std::istream& in);

/// width x height binary mask, row-major.
class Bitmask {
 public:
  Bitmask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  bool at_or_false(int x, int y) const;
  void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  const std::vector<std::uint8_t>& data() const { return bits_; }
  std::vector<std::uint8_t>& data() { return bits_; }

  /// Center of pixel (x, y) in continuous image coordinates.
  static Point2 center(int x, int y) { return {x + 0.5, y + 0.5}; }

  friend bool operator==(const Bitmask&, const Bitmask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

struct ChannelRange {
  std::uint8_t min = 0;
  std::uint8_t max = 255;
  bool contains(std::uint8_t v) const { return v >= min && v <= max; }
};

struct ColorRange {
  std::array<ChannelRange, 3> channels{};
  bool contains(Rgb c) const {
    return channels[0].contains(c.r) && channels[1].contains(c.g) && channels[2].contains(c.b);
  }
};

struct ColorThresholds {
  ColorRange meat;
  ColorRange fat;

  /// Wide bands around the simulator's class colors.
  static ColorThresholds defaults();
  void validate() const;
};

struct SegmentationMasks {
  Bitmask meat;
  Bitmask fat;
};

/// Per-pixel classification: meat if inside the meat bounds, else fat if
/// inside the fat bounds, else background. OpenMP across rows.
SegmentationMasks segment(const RasterImage& img, const ColorThresholds& th);

namespace reference {
/// Serial implementation kept as the test oracle for cobot::segment.
SegmentationMasks segment(const RasterImage& img, const ColorThresholds& th);
}  // namespace reference

}  // namespace cobot
