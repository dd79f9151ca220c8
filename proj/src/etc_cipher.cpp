#include "pixcrypt/etc_cipher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pixcrypt {

namespace {

bool is_grayscale(EtcVariant v) { return v != EtcVariant::kColor; }

void check_config(const EtcConfig& cfg) {
  if (cfg.bx <= 0 || cfg.by <= 0) throw DimensionError("block size must be positive");
  if (cfg.steps.rotate_invert && cfg.bx != cfg.by)
    throw DimensionError("rotation and inversion need square blocks (Bx == By)");
}

template <class T>
void shuffle_block_colors(BasicImage<T>& blk, int code) {
  auto px = blk.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const auto out = color_shuffle<T>({px[i], px[i + 1], px[i + 2]}, code);
    std::copy(out.begin(), out.end(), px.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

template <class T>
void negate_block(BasicImage<T>& blk) {
  for (auto& v : blk.data()) v = negate_value(v);
}

void check_material(const EtcKeyMaterial& km, std::size_t n, int channels) {
  auto ok = [n](std::size_t sz) { return sz == 0 || sz == n; };
  if (!ok(km.order.size()) || !ok(km.dihedral.size()) || !ok(km.negpos.size()) ||
      !ok(km.color.size()))
    throw DomainError("key material length does not match the block count");
  if (!km.color.empty() && channels != 3)
    throw DomainError("color shuffling needs a 3-channel image");
}

void require_variant(const EtcConfig& cfg, bool grayscale) {
  if (is_grayscale(cfg.variant) != grayscale)
    throw DomainError(grayscale ? "expected a grayscale-based EtC variant"
                                : "expected the color EtC variant");
}

}  // namespace

int negpos(int value, int bit, int bits) {
  if (bits < 1 || bits > 16) throw DomainError("bit depth out of range");
  const int full = (1 << bits) - 1;
  if (value < 0 || value > full) throw DomainError("pixel value out of range for bit depth");
  if (bit != 0 && bit != 1) throw DomainError("negpos bit must be 0 or 1");
  return bit ? (value ^ full) : value;
}

int color_code_inverse(int code) {
  const auto& row = kColorTable.at(static_cast<std::size_t>(code));
  std::array<int, 3> inv{};
  for (int j = 0; j < 3; ++j) inv[row[j]] = j;
  for (int c = 0; c < 6; ++c)
    if (kColorTable[c] == inv) return c;
  throw DomainError("color table is not closed under inversion");
}

int dihedral_inverse(int code) {
  if (code < 0 || code > 7) throw DomainError("dihedral code out of range");
  // Mirror codes are reflections and therefore involutions.
  return code < 4 ? (4 - code) % 4 : code;
}

template <class T>
BasicImage<T> dihedral_apply(const BasicImage<T>& blk, int code) {
  if (code < 0 || code > 7) throw DomainError("dihedral code out of range");
  if (code % 2 == 1 && blk.height() != blk.width())
    throw DimensionError("quarter-turn rotation of a non-square block");
  const int c = blk.channels();
  BasicImage<T> cur = blk;
  if (code >= 4) {
    BasicImage<T> m(c, cur.height(), cur.width());
    for (int y = 0; y < cur.height(); ++y)
      for (int x = 0; x < cur.width(); ++x)
        for (int ch = 0; ch < c; ++ch) m.at(y, x, ch) = cur.at(y, cur.width() - 1 - x, ch);
    cur = std::move(m);
  }
  for (int r = 0; r < code % 4; ++r) {
    const int h = cur.height();
    BasicImage<T> rot(c, cur.width(), h);
    for (int y = 0; y < rot.height(); ++y)
      for (int x = 0; x < rot.width(); ++x)
        for (int ch = 0; ch < c; ++ch) rot.at(y, x, ch) = cur.at(h - 1 - x, y, ch);
    cur = std::move(rot);
  }
  return cur;
}

template <class T>
BasicImage<T> etc_forward(const BasicImage<T>& img, const BlockGrid& grid,
                          const EtcKeyMaterial& km) {
  const std::size_t n = grid.count();
  check_material(km, n, img.channels());
  BasicImage<T> out(img.channels(), img.height(), img.width());
  for (std::size_t i = 0; i < n; ++i) {
    auto blk = extract_block(img, grid, km.order.empty() ? i : km.order[i]);
    if (!km.dihedral.empty()) blk = dihedral_apply(blk, km.dihedral[i]);
    if (!km.negpos.empty() && km.negpos[i]) negate_block(blk);
    if (!km.color.empty()) shuffle_block_colors(blk, km.color[i]);
    place_block(out, grid, i, blk);
  }
  return out;
}

template <class T>
BasicImage<T> etc_inverse(const BasicImage<T>& img, const BlockGrid& grid,
                          const EtcKeyMaterial& km) {
  const std::size_t n = grid.count();
  check_material(km, n, img.channels());
  BasicImage<T> out(img.channels(), img.height(), img.width());
  for (std::size_t i = 0; i < n; ++i) {
    auto blk = extract_block(img, grid, i);
    if (!km.color.empty()) shuffle_block_colors(blk, color_code_inverse(km.color[i]));
    if (!km.negpos.empty() && km.negpos[i]) negate_block(blk);
    if (!km.dihedral.empty()) blk = dihedral_apply(blk, dihedral_inverse(km.dihedral[i]));
    place_block(out, grid, km.order.empty() ? i : km.order[i], blk);
  }
  return out;
}

template Image dihedral_apply(const Image&, int);
template BasicImage<PixelTag> dihedral_apply(const BasicImage<PixelTag>&, int);
template Image etc_forward(const Image&, const BlockGrid&, const EtcKeyMaterial&);
template BasicImage<PixelTag> etc_forward(const BasicImage<PixelTag>&, const BlockGrid&,
                                          const EtcKeyMaterial&);
template Image etc_inverse(const Image&, const BlockGrid&, const EtcKeyMaterial&);
template BasicImage<PixelTag> etc_inverse(const BasicImage<PixelTag>&, const BlockGrid&,
                                          const EtcKeyMaterial&);

EtcKeyMaterial etc_key_material(const EtcConfig& cfg, std::size_t blocks) {
  EtcKeyMaterial km;
  if (cfg.steps.scramble)
    km.order = gen_permutation(derive_subkey(cfg.key, labels::kScramble), blocks);
  if (cfg.steps.rotate_invert)
    km.dihedral = gen_dihedral_codes(derive_subkey(cfg.key, labels::kRotate), blocks);
  if (cfg.steps.negpos)
    km.negpos = gen_binary_mask(derive_subkey(cfg.key, labels::kNegPos), blocks,
                                MaskMode::kBernoulliHalf);
  if (cfg.steps.color_shuffle && !is_grayscale(cfg.variant))
    km.color = gen_color_codes(derive_subkey(cfg.key, labels::kColor), blocks);
  return km;
}

Image encrypt_color(const Image& img, const EtcConfig& cfg) {
  require_variant(cfg, false);
  check_config(cfg);
  if (img.channels() != 3) throw DomainError("color-based encryption needs a 3-channel image");
  const auto grid = make_grid(img, cfg.bx, cfg.by);
  return etc_forward(img, grid, etc_key_material(cfg, grid.count()));
}

Image decrypt_color(const Image& img, const EtcConfig& cfg) {
  require_variant(cfg, false);
  check_config(cfg);
  if (img.channels() != 3) throw DomainError("color-based decryption needs a 3-channel image");
  const auto grid = make_grid(img, cfg.bx, cfg.by);
  return etc_inverse(img, grid, etc_key_material(cfg, grid.count()));
}

Image pack_grayscale_rgb(const Image& img) {
  if (img.channels() != 3) throw DomainError("grayscale packing needs a 3-channel image");
  const int h = img.height();
  Image packed(1, 3 * h, img.width());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < img.width(); ++x) packed.at(c * h + y, x) = img.at(y, x, c);
  return packed;
}

Image unpack_grayscale_rgb(const Image& packed) {
  if (packed.channels() != 1 || packed.height() % 3 != 0)
    throw DimensionError("packed grayscale image must be 1 channel with height divisible by 3");
  const int h = packed.height() / 3;
  Image img(3, h, packed.width());
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < img.width(); ++x) img.at(y, x, c) = packed.at(c * h + y, x);
  return img;
}

namespace {

std::uint8_t round_clamp(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

}  // namespace

std::array<std::uint8_t, 3> rgb_to_ycbcr(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  const double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
  const double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
  return {round_clamp(y), round_clamp(cb), round_clamp(cr)};
}

std::array<std::uint8_t, 3> ycbcr_to_rgb(std::uint8_t y, std::uint8_t cb, std::uint8_t cr) {
  const double dcb = cb - 128.0;
  const double dcr = cr - 128.0;
  return {round_clamp(y + 1.402 * dcr), round_clamp(y - 0.344136 * dcb - 0.714136 * dcr),
          round_clamp(y + 1.772 * dcb)};
}

Image pack_grayscale_ycbcr(const Image& img) {
  if (img.channels() != 3) throw DomainError("grayscale packing needs a 3-channel image");
  Image ycc(3, img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const auto v = rgb_to_ycbcr(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
      for (int c = 0; c < 3; ++c) ycc.at(y, x, c) = v[c];
    }
  return pack_grayscale_rgb(ycc);
}

Image unpack_grayscale_ycbcr(const Image& packed) {
  Image img = unpack_grayscale_rgb(packed);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const auto v = ycbcr_to_rgb(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = v[c];
    }
  return img;
}

Image etc_domain_image(const Image& img, const EtcConfig& cfg) {
  switch (cfg.variant) {
    case EtcVariant::kColor:
      return img;
    case EtcVariant::kGrayscaleRgb:
      return img.channels() == 3 ? pack_grayscale_rgb(img) : img;
    case EtcVariant::kGrayscaleYcbcr:
      return img.channels() == 3 ? pack_grayscale_ycbcr(img) : img;
  }
  return img;
}

Image encrypt_grayscale(const Image& img, const EtcConfig& cfg) {
  require_variant(cfg, true);
  check_config(cfg);
  if (img.channels() != 1 && img.channels() != 3)
    throw DomainError("grayscale-based encryption needs a 1- or 3-channel image");
  const Image packed = etc_domain_image(img, cfg);
  const auto grid = make_grid(packed, cfg.bx, cfg.by);
  return etc_forward(packed, grid, etc_key_material(cfg, grid.count()));
}

Image decrypt_grayscale(const Image& img, const EtcConfig& cfg) {
  require_variant(cfg, true);
  check_config(cfg);
  if (img.channels() != 1) throw DomainError("grayscale-based decryption needs a 1-channel image");
  const auto grid = make_grid(img, cfg.bx, cfg.by);
  return etc_inverse(img, grid, etc_key_material(cfg, grid.count()));
}

Image etc_encrypt(const Image& img, const EtcConfig& cfg) {
  return is_grayscale(cfg.variant) ? encrypt_grayscale(img, cfg) : encrypt_color(img, cfg);
}

Image etc_decrypt(const Image& img, const EtcConfig& cfg) {
  return is_grayscale(cfg.variant) ? decrypt_grayscale(img, cfg) : decrypt_color(img, cfg);
}

KeySpaceReport keyspace_for_blocks(std::uint64_t n) {
  if (n == 0) throw DomainError("key space of zero blocks");
  const double nd = static_cast<double>(n);
  const double log2_factorial = std::lgamma(nd + 1.0) / std::numbers::ln2;
  // 8 dihedral codes, 2 negpos bits and 6 color codes per block.
  const double per_block = 3.0 + 1.0 + std::log2(6.0);
  return {n, log2_factorial + nd * per_block};
}

KeySpaceReport keyspace_color(std::uint64_t x, std::uint64_t y, std::uint64_t bx,
                              std::uint64_t by) {
  if (bx == 0 || by == 0) throw DomainError("block dimensions must be positive");
  if (x == 0 || y == 0) throw DomainError("image dimensions must be positive");
  unsigned __int128 num = static_cast<unsigned __int128>(x) * y;
  unsigned __int128 den = static_cast<unsigned __int128>(bx) * by;
  const auto n = static_cast<std::uint64_t>(num / den);
  if (n == 0) throw DomainError("block larger than the image: no blocks");
  return keyspace_for_blocks(n);
}

}  // namespace pixcrypt
