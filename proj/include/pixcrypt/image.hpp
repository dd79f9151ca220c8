#pragma once

// Pixel grids, block partitioning and binary PGM/PPM I/O.
//
// Storage layout (also the flattening order of vectorize and of a flattened
// block): row-major across pixels, the channels of one pixel contiguous.
//   index(y, x, ch) = (y * width + x) * channels + ch

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pixcrypt/error.hpp"

namespace pixcrypt {

template <class T>
class BasicImage {
 public:
  using value_type = T;

  BasicImage() = default;

  BasicImage(int channels, int height, int width, T fill = T{})
      : channels_(channels), height_(height), width_(width) {
    check_shape();
    data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
  }

  BasicImage(int channels, int height, int width, std::vector<T> data)
      : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    check_shape();
    if (data_.size() != static_cast<std::size_t>(channels) * height * width)
      throw DimensionError("pixel buffer length does not match the image shape");
  }

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int y, int x, int ch) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + ch;
  }
  T& at(int y, int x, int ch = 0) { return data_[index(y, x, ch)]; }
  const T& at(int y, int x, int ch = 0) const { return data_[index(y, x, ch)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  bool same_shape(const BasicImage& o) const noexcept {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

  friend bool operator==(const BasicImage&, const BasicImage&) = default;

 private:
  void check_shape() const {
    if (channels_ < 1 || height_ < 0 || width_ < 0)
      throw DimensionError("invalid image shape");
  }

  int channels_ = 1;
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

// 8-bit image; the only depth the file codecs and ciphers accept.
using Image = BasicImage<std::uint8_t>;

// Non-overlapping Bx x By tiling of an image, blocks numbered in raster order.
struct BlockGrid {
  int block_width = 0;
  int block_height = 0;
  int cols = 0;
  int rows = 0;

  std::size_t count() const noexcept { return static_cast<std::size_t>(cols) * rows; }
  int col_of(std::size_t i) const noexcept { return static_cast<int>(i % cols); }
  int row_of(std::size_t i) const noexcept { return static_cast<int>(i / cols); }
};

/// Throws DimensionError unless bx, by > 0 and both divide the image exactly.
BlockGrid make_grid(int height, int width, int bx, int by);

template <class T>
BlockGrid make_grid(const BasicImage<T>& img, int bx, int by) {
  return make_grid(img.height(), img.width(), bx, by);
}

template <class T>
BasicImage<T> extract_block(const BasicImage<T>& img, const BlockGrid& g, std::size_t i) {
  BasicImage<T> blk(img.channels(), g.block_height, g.block_width);
  const int y0 = g.row_of(i) * g.block_height;
  const int x0 = g.col_of(i) * g.block_width;
  const std::size_t row_len = static_cast<std::size_t>(g.block_width) * img.channels();
  for (int y = 0; y < g.block_height; ++y) {
    const auto* src = &img.at(y0 + y, x0, 0);
    std::copy(src, src + row_len, &blk.at(y, 0, 0));
  }
  return blk;
}

template <class T>
void place_block(BasicImage<T>& img, const BlockGrid& g, std::size_t i, const BasicImage<T>& blk) {
  if (blk.height() != g.block_height || blk.width() != g.block_width ||
      blk.channels() != img.channels())
    throw DimensionError("block shape does not match the grid");
  const int y0 = g.row_of(i) * g.block_height;
  const int x0 = g.col_of(i) * g.block_width;
  const std::size_t row_len = static_cast<std::size_t>(g.block_width) * img.channels();
  for (int y = 0; y < g.block_height; ++y) {
    const auto* src = &blk.at(y, 0, 0);
    std::copy(src, src + row_len, &img.at(y0 + y, x0, 0));
  }
}

template <class T>
std::vector<BasicImage<T>> partition(const BasicImage<T>& img, int bx, int by) {
  const auto g = make_grid(img, bx, by);
  std::vector<BasicImage<T>> blocks;
  blocks.reserve(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) blocks.push_back(extract_block(img, g, i));
  return blocks;
}

template <class T>
BasicImage<T> assemble(const std::vector<BasicImage<T>>& blocks, int height, int width,
                       int channels, int bx, int by) {
  const auto g = make_grid(height, width, bx, by);
  if (blocks.size() != g.count()) throw DimensionError("block count does not match the grid");
  BasicImage<T> img(channels, height, width);
  for (std::size_t i = 0; i < blocks.size(); ++i) place_block(img, g, i, blocks[i]);
  return img;
}

template <class T>
std::vector<T> flatten_block(const BasicImage<T>& blk) {
  return blk.values();
}

template <class T>
BasicImage<T> unflatten_block(std::vector<T> values, int channels, int height, int width) {
  if (values.size() != static_cast<std::size_t>(channels) * height * width)
    throw DimensionError("flat block length does not match the block shape");
  return BasicImage<T>(channels, height, width, std::move(values));
}

// Binary PGM (P5) / PPM (P6), maxval 255.
Image read_image(const std::string& path);
void write_image(const Image& img, const std::string& path);
Image decode_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pnm(const Image& img);

}  // namespace pixcrypt
