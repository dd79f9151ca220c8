#include "pixcrypt/keystream.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "pixcrypt/error.hpp"

namespace pixcrypt {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium initialisation failed");
}

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

}  // namespace

SecretKey::SecretKey(Bytes bytes) : bytes_(std::move(bytes)) {}

SecretKey SecretKey::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw InvalidKeyError("hex key has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_digit(hex[2 * i]);
    const int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InvalidKeyError("hex key contains a non-hex character");
    out[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return SecretKey(std::move(out));
}

std::string SecretKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes_.size() * 2);
  for (auto b : bytes_) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

std::array<std::uint8_t, 32> hmac_sha256(std::span<const std::uint8_t> key,
                                         std::span<const std::uint8_t> message) {
  ensure_sodium();
  crypto_auth_hmacsha256_state st;
  std::array<std::uint8_t, 32> out{};
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  ensure_sodium();
  std::array<std::uint8_t, 32> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

SecretKey random_master_key() {
  ensure_sodium();
  Bytes b(32);
  randombytes_buf(b.data(), b.size());
  return SecretKey(std::move(b));
}

SecretKey derive_subkey(const SecretKey& master, std::string_view label) {
  if (master.empty()) throw InvalidKeyError("master key is empty");
  if (master.size() < SecretKey::kMinMasterBytes)
    throw InvalidKeyError("master key shorter than 16 bytes");
  const auto* p = reinterpret_cast<const std::uint8_t*>(label.data());
  const auto mac = hmac_sha256(master.bytes(), {p, label.size()});
  return SecretKey(Bytes(mac.begin(), mac.end()));
}

Keystream::Keystream(const SecretKey& subkey) {
  ensure_sodium();
  if (subkey.size() != key_.size())
    throw InvalidKeyError("keystream requires a 32-byte subkey");
  std::copy(subkey.bytes().begin(), subkey.bytes().end(), key_.begin());
}

void Keystream::refill() {
  static constexpr std::array<std::uint8_t, 64> kZero{};
  static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES> kNonce{};
  crypto_stream_chacha20_xor_ic(block_.data(), kZero.data(), kZero.size(), kNonce.data(),
                                counter_++, key_.data());
  pos_ = 0;
}

void Keystream::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (pos_ == block_.size()) refill();
    b = block_[pos_++];
  }
}

std::uint64_t Keystream::next_u64() {
  std::array<std::uint8_t, 8> raw{};
  fill(raw);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | raw[i];
  return v;
}

std::uint64_t Keystream::uniform(std::uint64_t n) {
  if (n == 0) throw DomainError("uniform: empty range");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t u = next_u64();
    if (u >= threshold) return u % n;
  }
}

Permutation gen_permutation(const SecretKey& subkey, std::size_t n) {
  if (n == 0) throw DomainError("permutation of an empty domain");
  Keystream ks(subkey);
  Permutation a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(ks.uniform(i + 1));
    if (j != i) a[i] = a[j];
    a[j] = static_cast<std::uint32_t>(i);
  }
  return a;
}

BinaryMask gen_binary_mask(const SecretKey& subkey, std::size_t n, MaskMode mode) {
  if (n == 0) throw DomainError("mask of an empty domain");
  BinaryMask mask(n);
  if (mode == MaskMode::kBernoulliHalf) {
    Keystream ks(subkey);
    Bytes raw((n + 7) / 8);
    ks.fill(raw);
    for (std::size_t i = 0; i < n; ++i) mask[i] = (raw[i >> 3] >> (i & 7)) & 1;
  } else {
    const auto p = gen_permutation(subkey, n);
    const std::size_t ones = (n + 1) / 2;
    for (std::size_t k = 0; k < n; ++k) mask[k] = p[k] < ones ? 1 : 0;
  }
  return mask;
}

namespace {

std::vector<std::uint8_t> gen_codes(const SecretKey& subkey, std::size_t n, std::uint64_t radix) {
  if (n == 0) throw DomainError("code sequence of an empty domain");
  Keystream ks(subkey);
  std::vector<std::uint8_t> codes(n);
  for (auto& c : codes) c = static_cast<std::uint8_t>(ks.uniform(radix));
  return codes;
}

}  // namespace

std::vector<std::uint8_t> gen_color_codes(const SecretKey& subkey, std::size_t n) {
  return gen_codes(subkey, n, 6);
}

std::vector<std::uint8_t> gen_dihedral_codes(const SecretKey& subkey, std::size_t n) {
  return gen_codes(subkey, n, 8);
}

Permutation invert_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<std::uint32_t>(i);
  return inv;
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

KeyFile read_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open key file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed key file " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("master") || !j["master"].is_string())
    throw IoError("key file " + path + " lacks a \"master\" hex string");
  KeyFile key;
  key.master = SecretKey::from_hex(j["master"].get<std::string>());
  if (key.master.size() < SecretKey::kMinMasterBytes)
    throw InvalidKeyError("master key shorter than 16 bytes");
  if (j.contains("FFX")) {
    if (!j["FFX"].is_string()) throw IoError("key file field \"FFX\" must be a string");
    key.ffx_password = j["FFX"].get<std::string>();
  }
  return key;
}

void write_key_file(const KeyFile& key, const std::string& path) {
  nlohmann::json j;
  j["master"] = key.master.hex();
  if (!key.ffx_password.empty()) j["FFX"] = key.ffx_password;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write key file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pixcrypt
