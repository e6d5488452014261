#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace repseg {

/// Row-major 8-bit image with 1 (luma) or 3 (RGB) interleaved channels.
/// Immutable once constructed; copies are cheap enough for the image sizes
/// this library targets and keep stages free of aliasing.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, std::vector<std::uint8_t> data);
  Image(int width, int height, int channels, std::uint8_t fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Dense pixel labeling, 0 = background. Nonzero labels present always form
/// {1..C}; the constructor rejects gaps.
class LabelMask {
 public:
  LabelMask() = default;
  LabelMask(int width, int height, std::vector<std::uint32_t> labels);
  /// All-background mask.
  LabelMask(int width, int height);

  /// Relabels nonzero values to {1..C} preserving their relative order.
  static LabelMask densified(int width, int height, std::vector<std::uint32_t> labels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::uint32_t label_count() const noexcept { return label_count_; }
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  std::uint32_t at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::uint32_t label_count_ = 0;
  std::vector<std::uint32_t> labels_;
};

/// Luma = round(0.299 R + 0.587 G + 0.114 B). One-channel input is returned as is.
Image to_gray(const Image& img);

// --- file IO (image_io.cpp) ---

/// Decodes an 8-bit PNG or baseline JPEG. Palette and sub-byte PNGs are
/// expanded, alpha is dropped. 16-bit PNGs are rejected with FormatError.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG (gray or RGB) via temp file + rename.
void write_image_png(const Image& img, const std::filesystem::path& path);

/// Writes a 16-bit grayscale PNG with pixel value == label.
void write_mask_png(const LabelMask& mask, const std::filesystem::path& path);

/// Reads a label PNG (8- or 16-bit gray). Sparse label sets are densified.
LabelMask load_mask_png(const std::filesystem::path& path);

/// Writes `bytes` to `path` atomically (sibling temp file, then rename).
void write_file_atomic(const std::filesystem::path& path, std::span<const char> bytes);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace repseg
