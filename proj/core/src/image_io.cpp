#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <system_error>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "repseg/errors.hpp"
#include "repseg/image.hpp"

namespace fs = std::filesystem;

namespace repseg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_read(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError(path.string() + ": no such file");
  if (fs::is_directory(path, ec)) throw IoError(path.string() + ": is a directory");
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError(path.string() + ": cannot open for reading: " + std::strerror(errno));
  return f;
}

fs::path temp_sibling(const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  return tmp;
}

void commit_temp(const fs::path& tmp, const fs::path& path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string() + ": cannot rename temp file into place");
  }
}

// ---- PNG ----

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadState() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteState() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<std::string*>(png_get_error_ptr(png));
  if (buf) *buf = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngRaw {
  int width = 0;
  int height = 0;
  int channels = 0;  // after transforms
  int bit_depth = 0; // 8 or 16 after transforms
  std::vector<std::uint8_t> bytes;
};

// Decodes to 8- or 16-bit gray or RGB, alpha stripped, palette expanded.
PngRaw read_png_raw(const fs::path& path) {
  FilePtr f = open_for_read(path);
  std::string err;
  PngReadState st;
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!st.png) throw IoError("libpng: out of memory");
  st.info = png_create_info_struct(st.png);
  if (!st.info) throw IoError("libpng: out of memory");

  PngRaw raw;
  if (setjmp(png_jmpbuf(st.png))) {
    throw FormatError(path.string() + ": invalid PNG: " + err);
  }
  png_init_io(st.png, f.get());
  png_read_info(st.png, st.info);

  const png_uint_32 w = png_get_image_width(st.png, st.info);
  const png_uint_32 h = png_get_image_height(st.png, st.info);
  const int color = png_get_color_type(st.png, st.info);
  const int depth = png_get_bit_depth(st.png, st.info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(st.png);
  if (png_get_valid(st.png, st.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(st.png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(st.png, st.info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(st.png);
  }
  if (depth == 16) png_set_swap(st.png);  // host little-endian 16-bit samples
  png_read_update_info(st.png, st.info);

  raw.width = static_cast<int>(w);
  raw.height = static_cast<int>(h);
  raw.channels = png_get_channels(st.png, st.info);
  raw.bit_depth = png_get_bit_depth(st.png, st.info);
  const std::size_t rowbytes = png_get_rowbytes(st.png, st.info);
  raw.bytes.resize(rowbytes * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = raw.bytes.data() + y * rowbytes;
  png_read_image(st.png, rows.data());
  png_read_end(st.png, nullptr);
  return raw;
}

void write_png_rows(const fs::path& path, int width, int height, int color_type, int bit_depth,
                    const std::vector<std::uint8_t>& bytes, std::size_t rowbytes) {
  const fs::path tmp = temp_sibling(path);
  {
    FilePtr f(std::fopen(tmp.c_str(), "wb"));
    if (!f) throw IoError(path.string() + ": cannot open for writing: " + std::strerror(errno));
    std::string err;
    PngWriteState st;
    st.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
    if (!st.png) throw IoError("libpng: out of memory");
    st.info = png_create_info_struct(st.png);
    if (!st.info) throw IoError("libpng: out of memory");
    if (setjmp(png_jmpbuf(st.png))) {
      throw IoError(path.string() + ": PNG write failed: " + err);
    }
    png_init_io(st.png, f.get());
    png_set_IHDR(st.png, st.info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(st.png, st.info);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
      rows[static_cast<std::size_t>(y)] =
          const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * rowbytes);
    }
    png_write_image(st.png, rows.data());
    png_write_end(st.png, nullptr);
    if (std::fflush(f.get()) != 0) throw IoError(path.string() + ": write failed");
  }
  commit_temp(tmp, path);
}

// ---- JPEG ----

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

Image read_jpeg(const fs::path& path) {
  FilePtr f = open_for_read(path);
  jpeg_decompress_struct cinfo{};
  JpegErrorMgr err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> data;
  int width = 0;
  int height = 0;
  int channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError(path.string() + ": invalid JPEG: " + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  data.resize(stride * static_cast<std::size_t>(height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = data.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return Image(width, height, channels, std::move(data));
}

enum class Codec { Png, Jpeg, Unknown };

Codec sniff(const fs::path& path) {
  FilePtr f = open_for_read(path);
  unsigned char magic[8] = {};
  const std::size_t n = std::fread(magic, 1, sizeof magic, f.get());
  if (n >= 8 && png_sig_cmp(magic, 0, 8) == 0) return Codec::Png;
  if (n >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) return Codec::Jpeg;
  return Codec::Unknown;
}

}  // namespace

Image load_image(const fs::path& path) {
  switch (sniff(path)) {
    case Codec::Jpeg:
      return read_jpeg(path);
    case Codec::Png: {
      PngRaw raw = read_png_raw(path);
      if (raw.bit_depth != 8) {
        throw FormatError(path.string() + ": " + std::to_string(raw.bit_depth) +
                          "-bit PNG input is not supported (8-bit only)");
      }
      return Image(raw.width, raw.height, raw.channels, std::move(raw.bytes));
    }
    case Codec::Unknown:
      break;
  }
  throw FormatError(path.string() + ": unsupported image format (expected PNG or JPEG)");
}

void write_image_png(const Image& img, const fs::path& path) {
  const int color = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  std::vector<std::uint8_t> bytes(img.data().begin(), img.data().end());
  write_png_rows(path, img.width(), img.height(), color, 8, bytes,
                 static_cast<std::size_t>(img.width()) * img.channels());
}

void write_mask_png(const LabelMask& mask, const fs::path& path) {
  if (mask.label_count() > 65535) {
    throw InvalidParam(path.string() + ": " + std::to_string(mask.label_count()) +
                       " labels exceed the 16-bit mask format");
  }
  const auto labels = mask.labels();
  std::vector<std::uint8_t> bytes(labels.size() * 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(labels[i] >> 8);  // PNG is big-endian
    bytes[2 * i + 1] = static_cast<std::uint8_t>(labels[i] & 0xFF);
  }
  write_png_rows(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 16, bytes,
                 static_cast<std::size_t>(mask.width()) * 2);
}

LabelMask load_mask_png(const fs::path& path) {
  if (sniff(path) != Codec::Png) throw FormatError(path.string() + ": label mask must be a PNG");
  PngRaw raw = read_png_raw(path);
  if (raw.channels != 1) {
    throw FormatError(path.string() + ": label mask must be single-channel");
  }
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  std::vector<std::uint32_t> labels(n);
  if (raw.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v;
      std::memcpy(&v, raw.bytes.data() + 2 * i, 2);
      labels[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) labels[i] = raw.bytes[i];
  }
  return LabelMask::densified(raw.width, raw.height, std::move(labels));
}

void write_file_atomic(const fs::path& path, std::span<const char> bytes) {
  const fs::path tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError(path.string() + ": write failed");
  }
  commit_temp(tmp, path);
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span<const char>(text.data(), text.size()));
}

}  // namespace repseg
