#include "repseg/image.hpp"

#include <algorithm>
#include <string>

#include "repseg/errors.hpp"

namespace repseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidParam("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                       std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height);
  if (channels != 1 && channels != 3) {
    throw InvalidParam("image channels must be 1 or 3, got " + std::to_string(channels));
  }
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw InvalidParam("image data length " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(width) + "x" +
                       std::to_string(height) + "x" + std::to_string(channels));
  }
}

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : Image(width, height, channels,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(height, 0)) *
                                          static_cast<std::size_t>(std::max(channels, 0)),
                                      fill)) {}

LabelMask::LabelMask(int width, int height, std::vector<std::uint32_t> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
  check_dims(width, height);
  if (labels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidParam("label count " + std::to_string(labels_.size()) + " does not match " +
                       std::to_string(width) + "x" + std::to_string(height));
  }
  std::uint32_t max_label = 0;
  for (auto l : labels_) max_label = std::max(max_label, l);
  if (max_label > 0) {
    std::vector<bool> seen(static_cast<std::size_t>(max_label) + 1, false);
    for (auto l : labels_) seen[l] = true;
    for (std::uint32_t l = 1; l <= max_label; ++l) {
      if (!seen[l]) {
        throw InvalidParam("label set is not dense: label " + std::to_string(l) +
                           " missing below max " + std::to_string(max_label));
      }
    }
  }
  label_count_ = max_label;
}

LabelMask::LabelMask(int width, int height)
    : LabelMask(width, height,
                std::vector<std::uint32_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                               static_cast<std::size_t>(std::max(height, 0)),
                                           0u)) {}

LabelMask LabelMask::densified(int width, int height, std::vector<std::uint32_t> labels) {
  std::vector<std::uint32_t> present;
  for (auto l : labels) {
    if (l != 0) present.push_back(l);
  }
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  for (auto& l : labels) {
    if (l != 0) {
      l = static_cast<std::uint32_t>(std::lower_bound(present.begin(), present.end(), l) -
                                     present.begin()) +
          1;
    }
  }
  return LabelMask(width, height, std::move(labels));
}

Image to_gray(const Image& img) {
  if (img.channels() == 1) return img;
  const auto src = img.data();
  std::vector<std::uint8_t> out(img.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned r = src[3 * i];
    const unsigned g = src[3 * i + 1];
    const unsigned b = src[3 * i + 2];
    // Integer form of round(0.299 R + 0.587 G + 0.114 B).
    out[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
  }
  return Image(img.width(), img.height(), 1, std::move(out));
}

}  // namespace repseg
