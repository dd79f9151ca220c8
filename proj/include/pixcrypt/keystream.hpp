#pragma once

// Deterministic key material for every transform in the library.
//
// Frozen algorithms (golden vectors in tests/data depend on them):
//   subkey(master, label) = HMAC-SHA256(key = master, msg = label bytes)
//   stream(subkey)        = ChaCha20 keystream, 64-bit zero nonce, block
//                           counter starting at 0
//   next_u64              = next 8 stream bytes, little-endian
//   uniform(n)            = rejection sampling: discard u < (2^64 - n) mod n,
//                           return u mod n
//   permutation(n)        = inside-out Fisher-Yates, j = uniform(i + 1)
//   bernoulli mask        = stream bytes, bit i = (byte[i / 8] >> (i % 8)) & 1
//   balanced mask         = bit k = (permutation(n)[k] < ceil(n / 2))
//   color / dihedral code = uniform(6) / uniform(8), one draw per element

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pixcrypt {

using Bytes = std::vector<std::uint8_t>;

// Opaque key bytes. A master key has at least kMinMasterBytes bytes; subkeys
// produced by derive_subkey are always 32 bytes.
class SecretKey {
 public:
  static constexpr std::size_t kMinMasterBytes = 16;
  static constexpr std::size_t kSubkeyBytes = 32;

  SecretKey() = default;
  explicit SecretKey(Bytes bytes);

  static SecretKey from_hex(std::string_view hex);

  const Bytes& bytes() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }
  bool empty() const noexcept { return bytes_.empty(); }
  std::string hex() const;

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  Bytes bytes_;
};

// Subkey labels used by the transforms.
namespace labels {
inline constexpr std::string_view kScramble = "K1";
inline constexpr std::string_view kRotate = "K2";
inline constexpr std::string_view kNegPos = "K3";
inline constexpr std::string_view kColor = "K4";
inline constexpr std::string_view kShf = "SHF";
inline constexpr std::string_view kNeg = "NEG";
inline constexpr std::string_view kFfx = "FFX";
}  // namespace labels

// Fresh 32-byte master key from the operating system CSPRNG.
SecretKey random_master_key();

/// Label-separated subkey. Throws InvalidKeyError for an empty or short master.
SecretKey derive_subkey(const SecretKey& master, std::string_view label);

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

// Sequential reader over the ChaCha20 keystream of a 32-byte subkey.
class Keystream {
 public:
  explicit Keystream(const SecretKey& subkey);

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform(std::uint64_t n);

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 64> block_{};
  std::uint64_t counter_ = 0;
  std::size_t pos_ = 64;
};

// 0-based bijection on {0, ..., n-1}.
using Permutation = std::vector<std::uint32_t>;

enum class MaskMode { kBernoulliHalf, kBalancedExact };

using BinaryMask = std::vector<std::uint8_t>;

Permutation gen_permutation(const SecretKey& subkey, std::size_t n);
BinaryMask gen_binary_mask(const SecretKey& subkey, std::size_t n, MaskMode mode);
std::vector<std::uint8_t> gen_color_codes(const SecretKey& subkey, std::size_t n);
std::vector<std::uint8_t> gen_dihedral_codes(const SecretKey& subkey, std::size_t n);

Permutation invert_permutation(const Permutation& p);
bool is_permutation(const Permutation& p);

// Key file: {"master": "<hex>"} with an optional "FFX" password string.
struct KeyFile {
  SecretKey master;
  std::string ffx_password;  // empty: derive from the master
};

KeyFile read_key_file(const std::string& path);
void write_key_file(const KeyFile& key, const std::string& path);

}  // namespace pixcrypt
