#include "pixcrypt/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace pixcrypt {

BlockGrid make_grid(int height, int width, int bx, int by) {
  if (bx <= 0 || by <= 0) throw DimensionError("block size must be positive");
  if (width <= 0 || height <= 0) throw DimensionError("cannot tile an empty image");
  if (width % bx != 0 || height % by != 0)
    throw DimensionError("image " + std::to_string(width) + "x" + std::to_string(height) +
                         " is not divisible into " + std::to_string(bx) + "x" +
                         std::to_string(by) + " blocks");
  return BlockGrid{bx, by, width / bx, height / by};
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads an unsigned decimal.
  long next_int() {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw IoError("malformed PNM header");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000L) throw IoError("PNM header value out of range");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw IoError("malformed PNM header");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw IoError("not a binary PGM/PPM file");
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader hr(bytes);
  const long width = hr.next_int();
  const long height = hr.next_int();
  const long maxval = hr.next_int();
  if (width <= 0 || height <= 0) throw IoError("PNM image has zero size");
  if (maxval != 255)
    throw IoError("unsupported PNM depth: maxval " + std::to_string(maxval) + " (only 255)");
  hr.single_space();
  const std::size_t need = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - hr.pos() < need) throw IoError("truncated PNM payload");
  std::vector<std::uint8_t> data(bytes.begin() + hr.pos(), bytes.begin() + hr.pos() + need);
  return Image(channels, static_cast<int>(height), static_cast<int>(width), std::move(data));
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  if (img.channels() != 1 && img.channels() != 3)
    throw DomainError("PNM output needs 1 or 3 channels");
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

Image read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_pnm(bytes);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_image(const Image& img, const std::string& path) {
  const auto bytes = encode_pnm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pixcrypt
