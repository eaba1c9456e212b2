#pragma once
// Grayscale image persistence: 8- and 16-bit PNG via libpng, plus ASCII PGM
// (P2).  Pixels are real-valued in [0,1] internally; writing clamps to [0,1]
// and quantizes with round-half-away-from-zero, reading divides by maxval.

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "image.hpp"

namespace anitv {

inline int quantize_unit(double v, int maxval) {
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  int q = static_cast<int>(std::floor(v * maxval + 0.5));  // half away from zero; v >= 0 here
  return q > maxval ? maxval : q;
}

// --- PGM (ASCII, P2) --------------------------------------------------------

inline void write_pgm(const std::string& path, const Image& img, int bit_depth = 8) {
  if (bit_depth != 8 && bit_depth != 16) throw parameter_error("pgm bit depth must be 8 or 16");
  const int maxval = bit_depth == 8 ? 255 : 65535;
  std::ofstream os(path);
  if (!os) throw io_error("cannot open '" + path + "' for writing");
  os << "P2\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (x) os << ' ';
      os << quantize_unit(img.at(y, x), maxval);
    }
    os << '\n';
  }
  if (!os) throw io_error("write failed for '" + path + "'");
}

inline Image read_pgm(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open '" + path + "'");
  auto next_token = [&]() -> std::string {
    std::string t;
    while (is) {
      int c = is.peek();
      if (c == '#') {  // comment to end of line
        std::string line;
        std::getline(is, line);
        continue;
      }
      if (std::isspace(c)) {
        is.get();
        continue;
      }
      break;
    }
    is >> t;
    return t;
  };
  if (next_token() != "P2") throw io_error("'" + path + "' is not an ASCII PGM (P2) file");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw io_error("malformed PGM header in '" + path + "'");
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
    throw io_error("unsupported PGM geometry in '" + path + "'");
  Image img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    long v = 0;
    try {
      v = std::stol(next_token());
    } catch (const std::exception&) {
      throw io_error("truncated PGM data in '" + path + "'");
    }
    if (v < 0 || v > maxval) throw io_error("PGM sample out of range in '" + path + "'");
    img.data[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

// --- PNG --------------------------------------------------------------------

namespace detail {

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace detail

inline Image read_png(const std::string& path) {
  detail::FileCloser fc;
  fc.f = std::fopen(path.c_str(), "rb");
  if (!fc.f) throw io_error("cannot open '" + path + "'");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw io_error("libpng init failed");
  }

  // Declared before setjmp so cleanup is well-defined on the error path.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, depth = 0;
  bool failed = false;

  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fc.f);
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    depth = png_get_bit_depth(png, info);
    int color = png_get_color_type(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw io_error("'" + path + "': only grayscale PNG images are supported");
    }
    if (depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
      depth = 8;
    }
    png_read_update_info(png, info);
    std::size_t rowbytes = png_get_rowbytes(png, info);
    pixels.resize(rowbytes * height);
    rows.resize(height);
    for (int y = 0; y < height; ++y) rows[y] = pixels.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) throw io_error("failed to decode PNG '" + path + "'");

  Image img(width, height);
  const int maxval = depth == 16 ? 65535 : 255;
  for (int y = 0; y < height; ++y) {
    const png_byte* row = rows[y];
    for (int x = 0; x < width; ++x) {
      int v = depth == 16 ? (row[2 * x] << 8) | row[2 * x + 1]  // network byte order
                          : row[x];
      img.at(y, x) = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

inline void write_png(const std::string& path, const Image& img, int bit_depth = 8) {
  if (bit_depth != 8 && bit_depth != 16) throw parameter_error("png bit depth must be 8 or 16");
  detail::FileCloser fc;
  fc.f = std::fopen(path.c_str(), "wb");
  if (!fc.f) throw io_error("cannot open '" + path + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw io_error("libpng init failed");
  }

  const int maxval = bit_depth == 8 ? 255 : 65535;
  const std::size_t rowbytes = static_cast<std::size_t>(img.width) * (bit_depth / 8);
  std::vector<png_byte> pixels(rowbytes * img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int q = quantize_unit(img.at(y, x), maxval);
      if (bit_depth == 16) {
        pixels[y * rowbytes + 2 * x] = static_cast<png_byte>(q >> 8);
        pixels[y * rowbytes + 2 * x + 1] = static_cast<png_byte>(q & 0xff);
      } else {
        pixels[y * rowbytes + x] = static_cast<png_byte>(q);
      }
    }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = pixels.data() + y * rowbytes;

  bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fc.f);
    png_set_IHDR(png, info, img.width, img.height, bit_depth, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (failed) throw io_error("failed to encode PNG '" + path + "'");
}

// --- dispatch by extension --------------------------------------------------

namespace detail {
inline std::string lower_ext(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}
}  // namespace detail

inline Image read_image(const std::string& path) {
  std::string ext = detail::lower_ext(path);
  if (ext == "png") return read_png(path);
  if (ext == "pgm") return read_pgm(path);
  throw io_error("unsupported image extension on '" + path + "' (use .png or .pgm)");
}

inline void write_image(const std::string& path, const Image& img, int bit_depth = 8) {
  std::string ext = detail::lower_ext(path);
  if (ext == "png") return write_png(path, img, bit_depth);
  if (ext == "pgm") return write_pgm(path, img, bit_depth);
  throw io_error("unsupported image extension on '" + path + "' (use .png or .pgm)");
}

}  // namespace anitv
