#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "repseg/image.hpp"

namespace repseg {

enum class CorruptionKind {
  GaussianNoise,
  GaussianBlur,
  PiecewiseAffine,
  Brightness,
  LinearContrast,
};

inline constexpr std::array<CorruptionKind, 5> kAllCorruptions = {
    CorruptionKind::GaussianNoise, CorruptionKind::GaussianBlur,
    CorruptionKind::PiecewiseAffine, CorruptionKind::Brightness,
    CorruptionKind::LinearContrast};

inline constexpr std::uint64_t kCorruptionSeed = 31337;

// Fixed corruption strengths.
inline constexpr double kBlurSigma = 3.0;
inline constexpr double kNoiseScale = 0.1 * 255.0;
inline constexpr double kContrastGain = 1.5;
inline constexpr int kBrightnessShift = 100;
inline constexpr double kPiecewiseAffineScale = 0.03;
inline constexpr int kPiecewiseAffineGrid = 4;

std::string_view to_string(CorruptionKind kind) noexcept;
/// Throws InvalidParam for unknown names.
CorruptionKind parse_corruption(std::string_view name);

/// Applies exactly one corruption. Output values are clamped to [0, 255] and
/// the result is a pure function of (img, kind, seed).
Image corrupt(const Image& img, CorruptionKind kind, std::uint64_t seed = kCorruptionSeed);

/// Ground truth that matches corrupt(img, kind, seed). Photometric kinds leave
/// the mask unchanged; piecewise_affine applies the same warp with
/// nearest-neighbor sampling, then densifies labels.
LabelMask corrupt_mask(const LabelMask& mask, CorruptionKind kind,
                       std::uint64_t seed = kCorruptionSeed);

}  // namespace repseg
