#include "pixcrypt/learnable.hpp"

#include <algorithm>
#include <cmath>

#include "pixcrypt/etc_cipher.hpp"

namespace pixcrypt {

std::vector<double> ScaledImage::normalized_values() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = normalized(i);
  return out;
}

Image ScaledImage::to_image() const {
  if (scale != 255) throw DomainError("image is not on the 8-bit scale");
  std::vector<std::uint8_t> px(values.begin(), values.end());
  return Image(channels, height, width, std::move(px));
}

Image ScaledImage::quantize() const {
  std::vector<std::uint8_t> px(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    px[i] = static_cast<std::uint8_t>(std::lround(255.0 * values[i] / scale));
  return Image(channels, height, width, std::move(px));
}

ScaledImage ScaledImage::from_image(const Image& img) {
  return {img.channels(), img.height(), img.width(),
          std::vector<std::uint16_t>(img.data().begin(), img.data().end()), 255};
}

namespace {

void check_pixelwise(const Image& img, const BinaryMask& mask,
                     const std::vector<std::uint8_t>& codes) {
  if (img.channels() != 3) throw DomainError("pixel-wise encryption needs a 3-channel image");
  const std::size_t px = static_cast<std::size_t>(img.height()) * img.width();
  if (mask.size() != 3 * px || codes.size() != px)
    throw DomainError("pixel-wise key material does not match the image size");
}

// Applies fn(flat_block) -> flat_block to every M x M block.
template <class T, class Fn>
BasicImage<T> per_block(const BasicImage<T>& img, int block, Fn&& fn) {
  const auto grid = make_grid(img, block, block);
  BasicImage<T> out(img.channels(), img.height(), img.width());
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto flat = flatten_block(extract_block(img, grid, i));
    place_block(out, grid, i, unflatten_block(fn(std::move(flat)), img.channels(), block, block));
  }
  return out;
}

std::size_t block_length(int channels, int block) {
  if (block < 1) throw DimensionError("block size must be at least 1");
  return static_cast<std::size_t>(channels) * block * block;
}

template <class V>
void check_vector(const V& v, std::size_t expected) {
  if (v.size() != expected) throw DomainError("key vector length does not match c*M*M");
}

}  // namespace

Image pixelwise_apply(const Image& img, const BinaryMask& mask,
                      const std::vector<std::uint8_t>& codes) {
  check_pixelwise(img, mask, codes);
  Image out(3, img.height(), img.width());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < codes.size(); ++p) {
    std::array<std::uint8_t, 3> px{};
    for (int c = 0; c < 3; ++c) {
      const std::size_t k = 3 * p + c;
      px[c] = mask[k] ? negate_value(src[k]) : src[k];
    }
    const auto sh = color_shuffle(px, codes[p]);
    std::copy(sh.begin(), sh.end(), dst.begin() + static_cast<std::ptrdiff_t>(3 * p));
  }
  return out;
}

Image pixelwise_invert(const Image& img, const BinaryMask& mask,
                       const std::vector<std::uint8_t>& codes) {
  check_pixelwise(img, mask, codes);
  Image out(3, img.height(), img.width());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t p = 0; p < codes.size(); ++p) {
    const auto px = color_shuffle<std::uint8_t>({src[3 * p], src[3 * p + 1], src[3 * p + 2]},
                                                color_code_inverse(codes[p]));
    for (int c = 0; c < 3; ++c) {
      const std::size_t k = 3 * p + c;
      dst[k] = mask[k] ? negate_value(px[c]) : px[c];
    }
  }
  return out;
}

namespace {

std::pair<BinaryMask, std::vector<std::uint8_t>> pixelwise_material(const Image& img,
                                                                    const SecretKey& key) {
  const std::size_t px = static_cast<std::size_t>(img.height()) * img.width();
  if (px == 0) throw DimensionError("pixel-wise encryption of an empty image");
  return {gen_binary_mask(derive_subkey(key, labels::kNegPos), 3 * px, MaskMode::kBernoulliHalf),
          gen_color_codes(derive_subkey(key, labels::kColor), px)};
}

}  // namespace

Image pixelwise_encrypt(const Image& img, const SecretKey& key) {
  if (img.channels() != 3) throw DomainError("pixel-wise encryption needs a 3-channel image");
  const auto [mask, codes] = pixelwise_material(img, key);
  return pixelwise_apply(img, mask, codes);
}

Image pixelwise_decrypt(const Image& img, const SecretKey& key) {
  if (img.channels() != 3) throw DomainError("pixel-wise decryption needs a 3-channel image");
  const auto [mask, codes] = pixelwise_material(img, key);
  return pixelwise_invert(img, mask, codes);
}

template <class T>
BasicImage<T> shf_apply(const BasicImage<T>& img, int block, const Permutation& v) {
  check_vector(v, block_length(img.channels(), block));
  if (!is_permutation(v)) throw DomainError("SHF vector is not a permutation");
  return per_block(img, block, [&v](std::vector<T> b) {
    std::vector<T> out(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) out[k] = b[v[k]];
    return out;
  });
}

template <class T>
BasicImage<T> shf_invert(const BasicImage<T>& img, int block, const Permutation& v) {
  check_vector(v, block_length(img.channels(), block));
  if (!is_permutation(v)) throw DomainError("SHF vector is not a permutation");
  return per_block(img, block, [&v](std::vector<T> b) {
    std::vector<T> out(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) out[v[k]] = b[k];
    return out;
  });
}

template <class T>
BasicImage<T> neg_apply(const BasicImage<T>& img, int block, const BinaryMask& r) {
  check_vector(r, block_length(img.channels(), block));
  return per_block(img, block, [&r](std::vector<T> b) {
    for (std::size_t k = 0; k < b.size(); ++k)
      if (r[k]) b[k] = negate_value(b[k]);
    return b;
  });
}

template Image shf_apply(const Image&, int, const Permutation&);
template BasicImage<PixelTag> shf_apply(const BasicImage<PixelTag>&, int, const Permutation&);
template Image shf_invert(const Image&, int, const Permutation&);
template Image neg_apply(const Image&, int, const BinaryMask&);
template BasicImage<PixelTag> neg_apply(const BasicImage<PixelTag>&, int, const BinaryMask&);

ScaledImage ffx_apply(const Image& img, int block, const BinaryMask& r, const FpeCipher& cipher) {
  if (img.empty()) throw DomainError("FFX of an empty image: maximum undefined");
  check_vector(r, block_length(img.channels(), block));
  const auto grid = make_grid(img, block, block);
  BasicImage<std::uint16_t> wide(img.channels(), img.height(), img.width());
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const auto flat = flatten_block(extract_block(img, grid, i));
    std::vector<std::uint16_t> enc(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k)
      enc[k] = static_cast<std::uint16_t>(r[k] ? cipher.encrypt(flat[k]) : flat[k]);
    place_block(wide, grid, i, unflatten_block(std::move(enc), img.channels(), block, block));
  }
  const auto max = *std::max_element(wide.data().begin(), wide.data().end());
  if (max == 0) throw DomainError("FFX output is all zero: maximum undefined");
  return {wide.channels(), wide.height(), wide.width(), wide.values(), max};
}

Permutation shf_vector(const SecretKey& key, int channels, int block) {
  return gen_permutation(derive_subkey(key, labels::kShf), block_length(channels, block));
}

BinaryMask neg_vector(const SecretKey& key, int channels, int block) {
  return gen_binary_mask(derive_subkey(key, labels::kNeg), block_length(channels, block),
                         MaskMode::kBalancedExact);
}

BinaryMask ffx_vector(const SecretKey& key, int channels, int block) {
  return gen_binary_mask(derive_subkey(key, labels::kFfx), block_length(channels, block),
                         MaskMode::kBalancedExact);
}

FpeCipher ffx_cipher(const TransformSpec& spec) {
  if (!spec.ffx_password.empty()) return FpeCipher::from_text(spec.ffx_password);
  return FpeCipher(derive_subkey(spec.key, labels::kFfx).bytes());
}

ScaledImage block_transform(const Image& img, const TransformSpec& spec) {
  switch (spec.variant) {
    case LearnableVariant::kPixelwise:
      return ScaledImage::from_image(pixelwise_encrypt(img, spec.key));
    case LearnableVariant::kShf:
      return ScaledImage::from_image(
          shf_apply(img, spec.block, shf_vector(spec.key, img.channels(), spec.block)));
    case LearnableVariant::kNeg:
      return ScaledImage::from_image(
          neg_apply(img, spec.block, neg_vector(spec.key, img.channels(), spec.block)));
    case LearnableVariant::kFfx:
      return ffx_apply(img, spec.block, ffx_vector(spec.key, img.channels(), spec.block),
                       ffx_cipher(spec));
  }
  throw DomainError("unknown transform variant");
}

Image block_transform_invert(const Image& img, const TransformSpec& spec) {
  switch (spec.variant) {
    case LearnableVariant::kPixelwise:
      return pixelwise_decrypt(img, spec.key);
    case LearnableVariant::kShf:
      return shf_invert(img, spec.block, shf_vector(spec.key, img.channels(), spec.block));
    case LearnableVariant::kNeg:
      return neg_apply(img, spec.block, neg_vector(spec.key, img.channels(), spec.block));
    case LearnableVariant::kFfx:
      throw NotInvertibleError("FFX is not invertible: the normalizing maximum is not kept");
  }
  throw DomainError("unknown transform variant");
}

}  // namespace pixcrypt
