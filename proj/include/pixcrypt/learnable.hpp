#pragma once

// Learnable image transforms: pixel-wise encryption and the block-wise
// SHF / NEG / FFX transforms.
//
// Block-wise transforms split the image into M x M blocks, flatten each block
// to c*M*M values (storage order), and apply one key-derived vector to every
// block:
//   SHF  b'(k) = b(v[k])                 v: permutation from subkey "SHF"
//   NEG  b'(k) = 255 - b(k) if r[k]      r: balanced mask from subkey "NEG"
//   FFX  b'(k) = Enc(b(k))  if r[k]      r: balanced mask from subkey "FFX"
//        then the whole image is divided by its maximum value.

#include <cstdint>
#include <string>
#include <vector>

#include "pixcrypt/fpe.hpp"
#include "pixcrypt/image.hpp"
#include "pixcrypt/keystream.hpp"
#include "pixcrypt/pixel_tag.hpp"

namespace pixcrypt {

enum class LearnableVariant { kPixelwise, kShf, kNeg, kFfx };

struct TransformSpec {
  LearnableVariant variant = LearnableVariant::kShf;
  int block = 4;  // M; unused by kPixelwise
  SecretKey key;
  std::string ffx_password;  // empty: the "FFX" subkey bytes are the password
};

// Transform output on the normalized scale: pixel i is values[i] / scale.
// SHF, NEG and pixel-wise outputs have scale 255; FFX uses the image maximum.
struct ScaledImage {
  int channels = 1;
  int height = 0;
  int width = 0;
  std::vector<std::uint16_t> values;
  std::uint16_t scale = 255;

  double normalized(std::size_t i) const { return static_cast<double>(values[i]) / scale; }
  std::vector<double> normalized_values() const;
  /// Exact 8-bit image; throws DomainError unless scale == 255.
  Image to_image() const;
  /// round(255 * value / scale), for viewing or storing as PGM/PPM.
  Image quantize() const;

  static ScaledImage from_image(const Image& img);
};

// Pixel-wise encryption: negative-positive per channel (bernoulli mask of
// length 3*H*W from "K3"), then Table-1 color shuffle per pixel (codes from "K4").
Image pixelwise_apply(const Image& img, const BinaryMask& mask,
                      const std::vector<std::uint8_t>& codes);
Image pixelwise_invert(const Image& img, const BinaryMask& mask,
                       const std::vector<std::uint8_t>& codes);
Image pixelwise_encrypt(const Image& img, const SecretKey& key);
Image pixelwise_decrypt(const Image& img, const SecretKey& key);

template <class T>
BasicImage<T> shf_apply(const BasicImage<T>& img, int block, const Permutation& v);
template <class T>
BasicImage<T> shf_invert(const BasicImage<T>& img, int block, const Permutation& v);
// Involution: applying the same mask twice restores the input.
template <class T>
BasicImage<T> neg_apply(const BasicImage<T>& img, int block, const BinaryMask& r);
ScaledImage ffx_apply(const Image& img, int block, const BinaryMask& r, const FpeCipher& cipher);

// Key-derived vectors for a c-channel image.
Permutation shf_vector(const SecretKey& key, int channels, int block);
BinaryMask neg_vector(const SecretKey& key, int channels, int block);
BinaryMask ffx_vector(const SecretKey& key, int channels, int block);
FpeCipher ffx_cipher(const TransformSpec& spec);

ScaledImage block_transform(const Image& img, const TransformSpec& spec);
/// Exact inverse for pixelwise, SHF and NEG. Throws NotInvertibleError for FFX.
Image block_transform_invert(const Image& img, const TransformSpec& spec);

}  // namespace pixcrypt
