#pragma once

#include <cstdint>

namespace pixcrypt {

// Stand-in pixel used to trace where each output sample of a transform comes
// from. Running a keyed transform over an image of tags, instead of pixel
// values, yields its pixel map.
struct PixelTag {
  std::uint32_t source = 0;
  bool negated = false;

  friend bool operator==(const PixelTag&, const PixelTag&) = default;
};

inline constexpr std::uint8_t negate_value(std::uint8_t v) noexcept {
  return static_cast<std::uint8_t>(v ^ 0xFF);
}

inline constexpr PixelTag negate_value(PixelTag t) noexcept {
  t.negated = !t.negated;
  return t;
}

}  // namespace pixcrypt
