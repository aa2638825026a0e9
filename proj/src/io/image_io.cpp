#include "io/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include <png.h>

#include "io/bytes.hpp"

namespace evrecon::io {
namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

std::uint16_t quantize(double v, int maxval) {
  return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
}

Image read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  std::size_t pos = 0;
  auto fail_fmt = [&](const std::string& m) { fail(ErrorKind::format, path.string() + ": " + m); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&] {
    skip_space();
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > 1'000'000'000) fail_fmt("header value too large");
    }
    if (!any) fail_fmt("malformed PGM header");
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    fail_fmt("not a PGM file");
  const bool binary = bytes[1] == '5';
  pos = 2;
  const long w = number();
  const long h = number();
  const long maxval = number();
  if (w <= 0 || h <= 0) fail_fmt("empty image");
  if (maxval <= 0 || maxval > 65535) fail(ErrorKind::format, path.string() + ": unsupported bit depth");
  Image img(static_cast<int>(w), static_cast<int>(h));
  auto px = img.pixels();
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t width = maxval < 256 ? 1 : 2;
    if (bytes.size() - std::min(pos, bytes.size()) < px.size() * width) fail_fmt("truncated pixel data");
    for (std::size_t i = 0; i < px.size(); ++i) {
      const unsigned v = width == 1 ? bytes[pos + i]
                                    : (static_cast<unsigned>(bytes[pos + 2 * i]) << 8) | bytes[pos + 2 * i + 1];
      px[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  } else {
    for (double& v : px) v = static_cast<double>(number()) / static_cast<double>(maxval);
  }
  return img;
}

void write_pgm(const Image& img, const std::filesystem::path& path, int bit_depth) {
  const int maxval = bit_depth == 16 ? 65535 : 255;
  ByteWriter w;
  const std::string header = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n" + std::to_string(maxval) + "\n";
  w.put_bytes(header.data(), header.size());
  for (double v : img.pixels()) {
    const std::uint16_t q = quantize(v, maxval);
    if (bit_depth == 16) {
      w.put<std::uint8_t>(static_cast<std::uint8_t>(q >> 8));
      w.put<std::uint8_t>(static_cast<std::uint8_t>(q & 0xff));
    } else {
      w.put<std::uint8_t>(static_cast<std::uint8_t>(q));
    }
  }
  write_file(path, w.bytes());
}

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  require(fp != nullptr, ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  require(png && info, ErrorKind::io, "libpng initialisation failed");
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> buffer;
  int w = 0, h = 0, depth = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::format, path.string() + ": malformed PNG");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  w = static_cast<int>(png_get_image_width(png, info));
  h = static_cast<int>(png_get_image_height(png, info));
  depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (depth == 16) png_set_swap(png);
  png_read_update_info(png, info);
  depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * static_cast<std::size_t>(h));
  for (int y = 0; y < h; ++y) rows.push_back(buffer.data() + stride * static_cast<std::size_t>(y));
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  if (depth != 8 && depth != 16) fail(ErrorKind::format, path.string() + ": unsupported bit depth");

  Image img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (depth == 8) {
        img(x, y) = rows[y][x] / 255.0;
      } else {
        std::uint16_t v;
        std::memcpy(&v, rows[y] + 2 * x, 2);
        img(x, y) = v / 65535.0;
      }
    }
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path, int bit_depth) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  require(fp != nullptr, ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  require(png && info, ErrorKind::io, "libpng initialisation failed");
  const int bytes_per = bit_depth == 16 ? 2 : 1;
  std::vector<std::uint8_t> buffer(static_cast<std::size_t>(img.width()) * img.height() * bytes_per);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * img.width() + x;
      if (bit_depth == 16) {
        const std::uint16_t q = quantize(img(x, y), 65535);
        buffer[2 * i] = static_cast<std::uint8_t>(q >> 8);
        buffer[2 * i + 1] = static_cast<std::uint8_t>(q & 0xff);
      } else {
        buffer[i] = static_cast<std::uint8_t>(quantize(img(x, y), 255));
      }
    }
  std::vector<png_bytep> rows;
  for (int y = 0; y < img.height(); ++y)
    rows.push_back(buffer.data() + static_cast<std::size_t>(y) * img.width() * bytes_per);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()),
               bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm") return read_pgm(path);
  fail(ErrorKind::format, path.string() + ": unsupported image extension");
}

void write_image(const Image& img, const std::filesystem::path& path, int bit_depth) {
  require(bit_depth == 8 || bit_depth == 16, ErrorKind::format, "unsupported bit depth");
  const std::string ext = lower_ext(path);
  if (ext == ".png") return write_png(img, path, bit_depth);
  if (ext == ".pgm") return write_pgm(img, path, bit_depth);
  fail(ErrorKind::format, path.string() + ": unsupported image extension");
}

Image normalize_range(const Image& img) {
  if (img.empty()) return img;
  const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
  const double a = *lo;
  const double range = *hi - a;
  if (range <= 0.0) return img;
  Image out = img;
  for (double& v : out.pixels()) v = (v - a) / range;
  return out;
}

Image signed_to_display(const Image& img) {
  double m = 0.0;
  for (double v : img.pixels()) m = std::max(m, std::fabs(v));
  Image out(img.width(), img.height(), 0.5);
  if (m == 0.0) return out;
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 0.5 + 0.5 * src[i] / m;
  return out;
}

}  // namespace evrecon::io
