#include "pixcrypt/transform.hpp"

#include <numeric>

namespace pixcrypt {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

BasicImage<PixelTag> identity_tags(int channels, int height, int width) {
  BasicImage<PixelTag> tags(channels, height, width);
  auto d = tags.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i].source = static_cast<std::uint32_t>(i);
  return tags;
}

std::vector<PixelTag> pixelwise_map(const BasicImage<PixelTag>& tags, const SecretKey& key) {
  if (tags.channels() != 3) throw DomainError("pixel-wise encryption needs a 3-channel image");
  const std::size_t px = static_cast<std::size_t>(tags.height()) * tags.width();
  const auto mask =
      gen_binary_mask(derive_subkey(key, labels::kNegPos), 3 * px, MaskMode::kBernoulliHalf);
  const auto codes = gen_color_codes(derive_subkey(key, labels::kColor), px);
  std::vector<PixelTag> out(tags.size());
  auto src = tags.data();
  for (std::size_t p = 0; p < px; ++p) {
    std::array<PixelTag, 3> t{};
    for (int c = 0; c < 3; ++c) t[c] = mask[3 * p + c] ? negate_value(src[3 * p + c]) : src[3 * p + c];
    const auto sh = color_shuffle(t, codes[p]);
    std::copy(sh.begin(), sh.end(), out.begin() + static_cast<std::ptrdiff_t>(3 * p));
  }
  return out;
}

}  // namespace

ScaledImage apply_transform(const Image& img, const Transform& t) {
  return std::visit(
      Overloaded{[&](const EtcConfig& c) { return ScaledImage::from_image(etc_encrypt(img, c)); },
                 [&](const TransformSpec& s) { return block_transform(img, s); }},
      t);
}

Image invert_transform(const Image& img, const Transform& t) {
  return std::visit(
      Overloaded{[&](const EtcConfig& c) { return etc_decrypt(img, c); },
                 [&](const TransformSpec& s) { return block_transform_invert(img, s); }},
      t);
}

Image transform_domain(const Image& img, const Transform& t) {
  if (const auto* c = std::get_if<EtcConfig>(&t)) return etc_domain_image(img, *c);
  return img;
}

Transform with_key(Transform t, const SecretKey& key) {
  std::visit([&](auto& v) { v.key = key; }, t);
  return t;
}

const SecretKey& key_of(const Transform& t) {
  return std::visit([](const auto& v) -> const SecretKey& { return v.key; }, t);
}

bool is_invertible(const Transform& t) {
  const auto* s = std::get_if<TransformSpec>(&t);
  return s == nullptr || s->variant != LearnableVariant::kFfx;
}

std::vector<PixelTag> pixel_map(int channels, int height, int width, const Transform& t) {
  const auto tags = identity_tags(channels, height, width);
  if (const auto* c = std::get_if<EtcConfig>(&t)) {
    if (c->variant != EtcVariant::kColor && channels != 1)
      throw DomainError("grayscale EtC pixel map is defined on the packed image");
    if (c->variant == EtcVariant::kColor && channels != 3)
      throw DomainError("color EtC needs a 3-channel image");
    if (c->steps.rotate_invert && c->bx != c->by)
      throw DimensionError("rotation and inversion need square blocks (Bx == By)");
    const auto grid = make_grid(height, width, c->bx, c->by);
    return etc_forward(tags, grid, etc_key_material(*c, grid.count())).values();
  }
  const auto& s = std::get<TransformSpec>(t);
  switch (s.variant) {
    case LearnableVariant::kPixelwise:
      return pixelwise_map(tags, s.key);
    case LearnableVariant::kShf:
      return shf_apply(tags, s.block, shf_vector(s.key, channels, s.block)).values();
    case LearnableVariant::kNeg:
      return neg_apply(tags, s.block, neg_vector(s.key, channels, s.block)).values();
    case LearnableVariant::kFfx:
      make_grid(height, width, s.block, s.block);
      return tags.values();
  }
  throw DomainError("unknown transform variant");
}

std::string variant_name(const Transform& t) {
  if (const auto* c = std::get_if<EtcConfig>(&t)) {
    switch (c->variant) {
      case EtcVariant::kColor: return "color";
      case EtcVariant::kGrayscaleRgb: return "grayscale-rgb";
      case EtcVariant::kGrayscaleYcbcr: return "grayscale-ycbcr";
    }
  }
  switch (std::get<TransformSpec>(t).variant) {
    case LearnableVariant::kPixelwise: return "pixelwise";
    case LearnableVariant::kShf: return "shf";
    case LearnableVariant::kNeg: return "neg";
    case LearnableVariant::kFfx: return "ffx";
  }
  return "unknown";
}

Transform make_transform(const std::string& variant, int bx, int by, int block,
                         const SecretKey& key, const std::string& ffx_password) {
  auto etc = [&](EtcVariant v) -> Transform {
    EtcConfig c;
    c.variant = v;
    c.bx = bx > 0 ? bx : block;
    c.by = by > 0 ? by : block;
    c.key = key;
    return c;
  };
  auto learn = [&](LearnableVariant v) -> Transform {
    return TransformSpec{v, block, key, ffx_password};
  };
  if (variant == "color") return etc(EtcVariant::kColor);
  if (variant == "grayscale-rgb") return etc(EtcVariant::kGrayscaleRgb);
  if (variant == "grayscale-ycbcr") return etc(EtcVariant::kGrayscaleYcbcr);
  if (variant == "pixelwise") return learn(LearnableVariant::kPixelwise);
  if (variant == "shf") return learn(LearnableVariant::kShf);
  if (variant == "neg") return learn(LearnableVariant::kNeg);
  if (variant == "ffx") return learn(LearnableVariant::kFfx);
  throw DomainError("unknown variant: " + variant);
}

}  // namespace pixcrypt
