#pragma once

// Block-scrambling encryption for Encryption-then-Compression (EtC) systems.
//
// Color-based scheme, per block in this order:
//   1. block scrambling       (permutation drawn from subkey K1)
//   2. rotation and inversion (dihedral code 0..7 from K2)
//   3. negative-positive      (one bit per block from K3, all channels)
//   4. color shuffling        (code 0..5 from K4)
// Grayscale-based schemes pack the three channels into one tall grayscale
// image and apply steps 1-3 only. Decryption undoes the steps in reverse.

#include <array>
#include <cstdint>
#include <vector>

#include "pixcrypt/image.hpp"
#include "pixcrypt/keystream.hpp"
#include "pixcrypt/pixel_tag.hpp"

namespace pixcrypt {

enum class EtcVariant { kColor, kGrayscaleRgb, kGrayscaleYcbcr };

struct EtcSteps {
  bool scramble = true;
  bool rotate_invert = true;
  bool negpos = true;
  bool color_shuffle = true;  // ignored by the grayscale variants
};

struct EtcConfig {
  EtcVariant variant = EtcVariant::kColor;
  int bx = 16;
  int by = 16;
  SecretKey key;
  EtcSteps steps;
};

// Per-block key material; a disabled step leaves its vector empty.
struct EtcKeyMaterial {
  Permutation order;
  std::vector<std::uint8_t> dihedral;
  BinaryMask negpos;
  std::vector<std::uint8_t> color;
};

EtcKeyMaterial etc_key_material(const EtcConfig& cfg, std::size_t blocks);

/// XOR with 2^bits - 1 when bit is set. Throws DomainError if value >= 2^bits.
int negpos(int value, int bit, int bits = 8);

// Table of output channel sources: row `code` gives the input channel that
// lands in R, G and B respectively.
inline constexpr std::array<std::array<int, 3>, 6> kColorTable{{
    {0, 1, 2},  // R G B
    {0, 2, 1},  // R B G
    {1, 0, 2},  // G R B
    {1, 2, 0},  // G B R
    {2, 0, 1},  // B R G
    {2, 1, 0},  // B G R
}};

int color_code_inverse(int code);

template <class T>
std::array<T, 3> color_shuffle(const std::array<T, 3>& rgb, int code) {
  const auto& row = kColorTable.at(static_cast<std::size_t>(code));
  return {rgb[row[0]], rgb[row[1]], rgb[row[2]]};
}

// Dihedral codes: rotation = code % 4 quarter turns clockwise, applied after a
// horizontal mirror when code >= 4. Code 0 is the identity.
int dihedral_inverse(int code);

template <class T>
BasicImage<T> dihedral_apply(const BasicImage<T>& blk, int code);

template <class T>
BasicImage<T> etc_forward(const BasicImage<T>& img, const BlockGrid& grid,
                          const EtcKeyMaterial& km);
template <class T>
BasicImage<T> etc_inverse(const BasicImage<T>& img, const BlockGrid& grid,
                          const EtcKeyMaterial& km);

Image encrypt_color(const Image& img, const EtcConfig& cfg);
Image decrypt_color(const Image& img, const EtcConfig& cfg);

// Vertical stack R over G over B: output is 1 x 3H x W.
Image pack_grayscale_rgb(const Image& img);
Image unpack_grayscale_rgb(const Image& packed);

// Full-range BT.601, rounded half away from zero and clamped to 0..255,
// stacked Y over Cb over Cr.
std::array<std::uint8_t, 3> rgb_to_ycbcr(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> ycbcr_to_rgb(std::uint8_t y, std::uint8_t cb, std::uint8_t cr);
Image pack_grayscale_ycbcr(const Image& img);
Image unpack_grayscale_ycbcr(const Image& packed);

/// Packs a 3-channel input according to the variant; a 1-channel input is
/// taken as already packed. Output is always single-channel.
Image encrypt_grayscale(const Image& img, const EtcConfig& cfg);
/// Returns the packed grayscale-based image; unpack it with the variant's unpack.
Image decrypt_grayscale(const Image& img, const EtcConfig& cfg);

// Variant dispatch.
Image etc_encrypt(const Image& img, const EtcConfig& cfg);
Image etc_decrypt(const Image& img, const EtcConfig& cfg);
// Image the encryption actually operates on (packed for grayscale variants).
Image etc_domain_image(const Image& img, const EtcConfig& cfg);

struct KeySpaceReport {
  std::uint64_t n = 0;
  double log2_keyspace = 0.0;  // log2(n! * 8^n * 2^n * 6^n)
};

KeySpaceReport keyspace_for_blocks(std::uint64_t n);
/// n = floor((X / Bx) * (Y / By)).
KeySpaceReport keyspace_color(std::uint64_t x, std::uint64_t y, std::uint64_t bx,
                              std::uint64_t by);

}  // namespace pixcrypt
