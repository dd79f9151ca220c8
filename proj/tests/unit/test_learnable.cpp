#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pixcrypt/learnable.hpp"
#include "test_support.hpp"

using namespace pixcrypt;
using testsupport::master;
using testsupport::pattern_image;
using testsupport::random_image;

namespace {

TransformSpec spec_of(LearnableVariant v, int block = 4, SecretKey key = master()) {
  TransformSpec s;
  s.variant = v;
  s.block = block;
  s.key = std::move(key);
  return s;
}

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

}  // namespace

TEST_CASE("pixel-wise hand example") {
  Image px(3, 1, 1, std::vector<std::uint8_t>{0, 128, 255});
  const auto out = pixelwise_apply(px, {1, 1, 1}, {5});
  CHECK(out.values() == std::vector<std::uint8_t>{0, 127, 255});
  CHECK(pixelwise_invert(out, {1, 1, 1}, {5}) == px);
  CHECK(pixelwise_apply(px, {0, 0, 0}, {0}) == px);
  CHECK_THROWS_AS(pixelwise_apply(px, {1, 1}, {5}), DomainError);
}

TEST_CASE("golden block-wise outputs") {
  const auto g = testsupport::golden();
  const auto img = pattern_image(32, 32, 3);
  CHECK(testsupport::image_digest(block_transform(img, spec_of(LearnableVariant::kShf)).to_image()) ==
        g["shf_4_sha256"].get<std::string>());
  CHECK(testsupport::image_digest(block_transform(img, spec_of(LearnableVariant::kNeg)).to_image()) ==
        g["neg_4_sha256"].get<std::string>());
  CHECK(testsupport::image_digest(pixelwise_encrypt(img, master())) ==
        g["pixelwise_sha256"].get<std::string>());
}

TEST_CASE("FFX matches the scalar oracle") {
  std::ifstream in(testsupport::data_path("ffx_16x16_expected.txt"));
  std::string line, word;
  std::getline(in, line);
  int max = 0;
  in >> word >> max;
  std::vector<int> expected;
  for (int v; in >> v;) expected.push_back(v);
  REQUIRE(expected.size() == 768);

  const auto out = block_transform(pattern_image(16, 16, 3), spec_of(LearnableVariant::kFfx));
  CHECK(out.scale == max);
  REQUIRE(out.values.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(out.values[i] == expected[i]);
  for (double v : out.normalized_values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("FFX details") {
  auto s = spec_of(LearnableVariant::kFfx);
  CHECK_THROWS_AS(block_transform_invert(pattern_image(8, 8, 3), s), NotInvertibleError);
  CHECK_THROWS_AS(ffx_apply(Image(1, 4, 4), 4, BinaryMask(16, 0), FpeCipher::from_text("pw")),
                  DomainError);
  CHECK_THROWS_AS(block_transform(Image(3, 0, 0), s), DomainError);
  s.ffx_password = "password";
  const auto f = FpeCipher::from_text("password");
  const auto img = pattern_image(8, 8, 1);
  const auto out = block_transform(img, s);
  const auto r = ffx_vector(s.key, 1, 4);
  const auto grid = make_grid(img, 4, 4);
  for (std::size_t b = 0; b < grid.count(); ++b) {
    const auto flat = flatten_block(extract_block(img, grid, b));
    const int y0 = grid.row_of(b) * 4, x0 = grid.col_of(b) * 4;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      const int y = y0 + static_cast<int>(k) / 4, x = x0 + static_cast<int>(k) % 4;
      CHECK(out.values[img.index(y, x, 0)] == (r[k] ? f.encrypt(flat[k]) : flat[k]));
    }
  }
  const auto hi = *std::max_element(out.values.begin(), out.values.end());
  CHECK(out.scale == hi);
}

TEST_CASE("SHF with the identity vector is the identity") {
  const auto img = pattern_image(8, 8, 3);
  CHECK(shf_apply(img, 4, identity(48)) == img);
  Permutation bad = identity(48);
  bad[0] = 1;
  CHECK_THROWS_AS(shf_apply(img, 4, bad), DomainError);
  CHECK_THROWS_AS(shf_apply(img, 4, identity(16)), DomainError);
}

TEST_CASE("round trips for SHF, NEG and pixel-wise") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + rng() % 4;
    const int c = (rng() & 1) ? 3 : 1;
    const auto img = random_image(rng, c, m * (1 + rng() % 4), m * (1 + rng() % 4));
    const auto key = testsupport::random_secret(rng);
    for (auto v : {LearnableVariant::kShf, LearnableVariant::kNeg}) {
      const auto s = spec_of(v, m, key);
      CHECK(block_transform_invert(block_transform(img, s).to_image(), s) == img);
    }
    if (c == 3) {
      const auto s = spec_of(LearnableVariant::kPixelwise, m, key);
      CHECK(block_transform_invert(block_transform(img, s).to_image(), s) == img);
    }
  }
}

TEST_CASE("NEG is an involution and SHF keeps block multisets") {
  std::mt19937_64 rng(13);
  const auto img = random_image(rng, 3, 16, 16);
  const auto s = spec_of(LearnableVariant::kNeg);
  CHECK(block_transform(block_transform(img, s).to_image(), s).to_image() == img);

  const auto shf = block_transform(img, spec_of(LearnableVariant::kShf)).to_image();
  const auto a = partition(img, 4, 4), b = partition(shf, 4, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = a[i].values(), y = b[i].values();
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    CHECK(x == y);
  }
}

TEST_CASE("same vector in every block") {
  const auto img = pattern_image(8, 8, 1);
  const auto out = block_transform(img, spec_of(LearnableVariant::kNeg)).to_image();
  const auto r = neg_vector(master(), 1, 4);
  const auto blocks = partition(out, 4, 4), plain = partition(img, 4, 4);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t k = 0; k < 16; ++k)
      CHECK(blocks[i].data()[k] == (r[k] ? 255 - plain[i].data()[k] : plain[i].data()[k]));
}

TEST_CASE("block size must divide the image") {
  CHECK_THROWS_AS(block_transform(pattern_image(10, 8, 3), spec_of(LearnableVariant::kShf)), DimensionError);
  CHECK_THROWS_AS(block_transform(pattern_image(8, 8, 3), spec_of(LearnableVariant::kNeg, 0)), DimensionError);
  CHECK_THROWS_AS(pixelwise_encrypt(pattern_image(8, 8, 1), master()), DomainError);
}

TEST_CASE("scaled image helpers") {
  ScaledImage s{1, 1, 2, {0, 500}, 1000};
  CHECK(s.normalized(1) == doctest::Approx(0.5));
  CHECK(s.quantize().values() == std::vector<std::uint8_t>{0, 128});
  CHECK_THROWS_AS(s.to_image(), DomainError);
  const auto img = pattern_image(2, 2, 3);
  CHECK(ScaledImage::from_image(img).to_image() == img);
}
