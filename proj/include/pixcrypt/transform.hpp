#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pixcrypt/etc_cipher.hpp"
#include "pixcrypt/learnable.hpp"

namespace pixcrypt {

// Any keyed transform in the library.
using Transform = std::variant<EtcConfig, TransformSpec>;

ScaledImage apply_transform(const Image& img, const Transform& t);
/// Inverse on the transform's domain (the packed image for grayscale EtC).
Image invert_transform(const Image& img, const Transform& t);
/// The image a transform actually permutes: packed grayscale for the
/// grayscale EtC variants, the input itself otherwise.
Image transform_domain(const Image& img, const Transform& t);

Transform with_key(Transform t, const SecretKey& key);
const SecretKey& key_of(const Transform& t);
bool is_invertible(const Transform& t);

// Output sample k of the transform is domain sample map[k].source, negated
// when map[k].negated. FFX positions map to themselves (the cipher is not
// traced). Shape arguments describe the domain image.
std::vector<PixelTag> pixel_map(int channels, int height, int width, const Transform& t);

// Names used on the command line and in reports.
std::string variant_name(const Transform& t);
/// Accepts color, grayscale-rgb, grayscale-ycbcr, pixelwise, shf, neg, ffx.
/// `block` feeds Bx/By for EtC when bx/by are zero, and M for the learnable ones.
Transform make_transform(const std::string& variant, int bx, int by, int block,
                         const SecretKey& key, const std::string& ffx_password = {});

}  // namespace pixcrypt
