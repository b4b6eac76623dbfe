#pragma once

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace rivid {

/// RGB image, channel-major (CHW), values in [0,1].
struct ImageTensor {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // 3 * height * width

  ImageTensor() = default;
  ImageTensor(int h, int w) : height(h), width(w), data(3u * h * w, 0.0) {}

  double& at(int ch, int y, int x) {
    return data[(static_cast<std::size_t>(ch) * height + y) * width + x];
  }
  double at(int ch, int y, int x) const {
    return data[(static_cast<std::size_t>(ch) * height + y) * width + x];
  }
  double* channel(int ch) { return data.data() + static_cast<std::size_t>(ch) * height * width; }
  const double* channel(int ch) const {
    return data.data() + static_cast<std::size_t>(ch) * height * width;
  }

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }

  /// Domain invariant: values in [0,1], height >= 8, width >= 4.
  void validate(const std::string& what = "image") const {
    if (height < 8 || width < 4)
      throw std::runtime_error(what + ": size " + std::to_string(height) + "x" +
                               std::to_string(width) + " below minimum 8x4");
    for (double v : data)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::runtime_error(what + ": pixel value outside [0,1]");
  }

  void clamp01() {
    for (double& v : data) v = std::clamp(v, 0.0, 1.0);
  }
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open file: " + path);
  return f;
}

struct PngError {
  std::jmp_buf env;
  static void handler(png_structp png, png_const_charp) {
    std::longjmp(static_cast<PngError*>(png_get_error_ptr(png))->env, 1);
  }
  static void warn(png_structp, png_const_charp) {}
};

inline ImageTensor decode_png(std::FILE* f, const std::string& path) {
  PngError err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           PngError::handler, PngError::warn);
  if (!png) throw std::runtime_error("png init failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_byte> raw;
  std::vector<png_bytep> rows;
  if (setjmp(err.env)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("not a decodable PNG: " + path);
  }
  png_init_io(png, f);
  png_read_info(png, info);
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color = 0;
  png_get_IHDR(png, info, &w, &h, &bit_depth, &color, nullptr, nullptr, nullptr);
  // Normalize everything to 8-bit RGB.
  if (bit_depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raw.resize(static_cast<std::size_t>(h) * w * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageTensor img(static_cast<int>(h), static_cast<int>(w));
  for (int ch = 0; ch < 3; ++ch) {
    double* dst = img.channel(ch);
    for (std::size_t p = 0; p < img.pixels(); ++p)
      dst[p] = static_cast<double>(raw[p * 3 + ch]) / 255.0;
  }
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf env;
  static void on_error(j_common_ptr cinfo) {
    std::longjmp(reinterpret_cast<JpegErrorMgr*>(cinfo->err)->env, 1);
  }
};

inline ImageTensor decode_jpeg(std::FILE* f, const std::string& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = JpegErrorMgr::on_error;
  if (setjmp(err.env)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error("not a decodable JPEG: " + path);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  std::vector<JSAMPLE> row(static_cast<std::size_t>(w) * 3);
  ImageTensor img(h, w);
  JSAMPROW rp = row.data();
  while (cinfo.output_scanline < cinfo.output_height) {
    int y = static_cast<int>(cinfo.output_scanline);
    jpeg_read_scanlines(&cinfo, &rp, 1);
    for (int ch = 0; ch < 3; ++ch) {
      double* dst = img.channel(ch) + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) dst[x] = static_cast<double>(row[x * 3 + ch]) / 255.0;
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

inline bool has_png_signature(std::FILE* f) {
  unsigned char sig[8] = {};
  std::size_t got = std::fread(sig, 1, 8, f);
  std::rewind(f);
  return got == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace detail

/// Loads a PNG or JPEG file as RGB in [0,1]. 8-bit value v maps to v/255.
inline ImageTensor load_image(const std::string& path) {
  auto f = detail::open_file(path, "rb");
  if (detail::has_png_signature(f.get())) return detail::decode_png(f.get(), path);
  unsigned char m[2] = {};
  if (std::fread(m, 1, 2, f.get()) == 2 && m[0] == 0xFF && m[1] == 0xD8) {
    std::rewind(f.get());
    return detail::decode_jpeg(f.get(), path);
  }
  throw std::runtime_error("unsupported image payload (not PNG/JPEG): " + path);
}

/// Writes an 8-bit RGB PNG; values are clamped to [0,1] and rounded.
inline void save_image_png(const ImageTensor& img, const std::string& path) {
  auto f = detail::open_file(path, "wb");
  detail::PngError err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            detail::PngError::handler, detail::PngError::warn);
  if (!png) throw std::runtime_error("png init failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(err.env)) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png write failed: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int ch = 0; ch < 3; ++ch) {
        double v = std::clamp(img.at(ch, y, x), 0.0, 1.0);
        row[static_cast<std::size_t>(x) * 3 + ch] =
            static_cast<png_byte>(std::lround(v * 255.0));
      }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

/// Writes an 8-bit grayscale PNG from weights in [0,1] (mask files).
inline void save_gray_png(const std::vector<double>& values, int height, int width,
                          const std::string& path) {
  auto f = detail::open_file(path, "wb");
  detail::PngError err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            detail::PngError::handler, detail::PngError::warn);
  if (!png) throw std::runtime_error("png init failed");
  png_infop info = png_create_info_struct(png);
  if (setjmp(err.env)) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png write failed: " + path);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(width));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = std::clamp(values[static_cast<std::size_t>(y) * width + x], 0.0, 1.0);
      row[x] = static_cast<png_byte>(std::lround(v * 255.0));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct ImageSize {
  int height = 0;
  int width = 0;
};

/// Reads only the header to get dimensions; used by manifest validation so
/// checking a corpus does not decode every pixel.
inline ImageSize probe_image_size(const std::string& path) {
  auto f = detail::open_file(path, "rb");
  unsigned char buf[32] = {};
  std::size_t got = std::fread(buf, 1, sizeof buf, f.get());
  if (got >= 24 && png_sig_cmp(buf, 0, 8) == 0) {
    auto be32 = [&](std::size_t off) {
      return (static_cast<std::uint32_t>(buf[off]) << 24) |
             (static_cast<std::uint32_t>(buf[off + 1]) << 16) |
             (static_cast<std::uint32_t>(buf[off + 2]) << 8) |
             static_cast<std::uint32_t>(buf[off + 3]);
    };
    return {static_cast<int>(be32(20)), static_cast<int>(be32(16))};
  }
  if (got >= 2 && buf[0] == 0xFF && buf[1] == 0xD8) {
    // Scan JPEG markers for a start-of-frame segment.
    std::fseek(f.get(), 2, SEEK_SET);
    while (true) {
      int c = std::fgetc(f.get());
      if (c == EOF) break;
      if (c != 0xFF) continue;
      int marker = std::fgetc(f.get());
      while (marker == 0xFF) marker = std::fgetc(f.get());
      if (marker == EOF) break;
      if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) continue;
      unsigned char lenb[2];
      if (std::fread(lenb, 1, 2, f.get()) != 2) break;
      const long seglen = (lenb[0] << 8) | lenb[1];
      const bool sof = (marker >= 0xC0 && marker <= 0xCF) && marker != 0xC4 &&
                       marker != 0xC8 && marker != 0xCC;
      if (sof) {
        unsigned char dim[5];
        if (std::fread(dim, 1, 5, f.get()) != 5) break;
        return {(dim[1] << 8) | dim[2], (dim[3] << 8) | dim[4]};
      }
      std::fseek(f.get(), seglen - 2, SEEK_CUR);
    }
    throw std::runtime_error("cannot find JPEG frame header: " + path);
  }
  throw std::runtime_error("unsupported image payload (not PNG/JPEG): " + path);
}

}  // namespace rivid
