#include "cobot/image.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace cobot {

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error("invalid image size");
  pixels_.resize(3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw Error("invalid image size");
  if (pixels_.size() != 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error("pixel buffer size mismatch");
  }
}

Rgb RasterImage::at(int x, int y) const {
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x));
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void RasterImage::set(int x, int y, Rgb c) {
  const std::size_t i = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x));
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
}

void write_ppm(std::ostream& out, const RasterImage& img) {
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.pixels().size()));
}

std::string encode_ppm(const RasterImage& img) {
  std::ostringstream os(std::ios::binary);
  write_ppm(os, img);
  return os.str();
}

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

RasterImage read_ppm(std::istream& in) {
  if (next_token(in) != "P6") throw Error("not a P6 PPM");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token(in));
    h = std::stoi(next_token(in));
    maxval = std::stoi(next_token(in));
  } catch (const std::exception&) {
    throw Error("malformed PPM header");
  }
  if (maxval != 255) throw Error("unsupported PPM maxval");
  if (w <= 0 || h <= 0) throw Error("invalid image size");
  std::vector<std::uint8_t> px(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (static_cast<std::size_t>(in.gcount()) != px.size()) throw Error("truncated PPM");
  return RasterImage(w, h, std::move(px));
}

Bitmask::Bitmask(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error("invalid mask size");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

bool Bitmask::at_or_false(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
  return at(x, y);
}

std::size_t Bitmask::count() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

ColorThresholds ColorThresholds::defaults() {
  ColorThresholds th;
  th.meat.channels = {ChannelRange{130, 210}, ChannelRange{20, 110}, ChannelRange{20, 110}};
  th.fat.channels = {ChannelRange{200, 255}, ChannelRange{185, 255}, ChannelRange{165, 255}};
  return th;
}

void ColorThresholds::validate() const {
  for (const auto* range : {&meat, &fat}) {
    for (const auto& ch : range->channels) {
      if (ch.min > ch.max) throw Error("threshold min exceeds max");
    }
  }
}

SegmentationMasks segment(const RasterImage& img, const ColorThresholds& th) {
  SegmentationMasks out{Bitmask(img.width(), img.height()), Bitmask(img.width(), img.height())};
  const int w = img.width();
  const int h = img.height();
  const std::uint8_t* px = img.pixels().data();
  std::uint8_t* meat = out.meat.data().data();
  std::uint8_t* fat = out.fat.data().data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
    for (int x = 0; x < w; ++x) {
      const std::size_t i = row + static_cast<std::size_t>(x);
      const Rgb c{px[3 * i], px[3 * i + 1], px[3 * i + 2]};
      const bool is_meat = th.meat.contains(c);
      meat[i] = is_meat;
      fat[i] = !is_meat && th.fat.contains(c);
    }
  }
  return out;
}

namespace reference {

SegmentationMasks segment(const RasterImage& img, const ColorThresholds& th) {
  SegmentationMasks out{Bitmask(img.width(), img.height()), Bitmask(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Rgb c = img.at(x, y);
      if (th.meat.contains(c)) {
        out.meat.set(x, y);
      } else if (th.fat.contains(c)) {
        out.fat.set(x, y);
      }
    }
  }
  return out;
}

}  // namespace reference

}  // namespace cobot
