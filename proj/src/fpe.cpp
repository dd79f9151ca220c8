#include "pixcrypt/fpe.hpp"

#include <array>
#include <string>

#include "pixcrypt/error.hpp"

namespace pixcrypt {

namespace {

constexpr int pow10(int m) { return m == 1 ? 10 : 100; }

int width_of_round(int i) { return i % 2 == 0 ? 1 : 2; }

void check_domain(int v) {
  if (v < 0 || v >= FpeCipher::kDomain)
    throw DomainError("FPE input " + std::to_string(v) + " outside 0..999");
}

}  // namespace

FpeCipher::FpeCipher(Bytes password, int rounds) : password_(std::move(password)), rounds_(rounds) {
  if (password_.empty()) throw InvalidKeyError("FPE password is empty");
  if (rounds_ <= 0 || rounds_ % 2 != 0)
    throw DomainError("FPE round count must be positive and even");
  table_.resize(static_cast<std::size_t>(rounds_) * 100);
  for (int i = 0; i < rounds_; ++i)
    for (int b = 0; b < 100; ++b)
      table_[static_cast<std::size_t>(i) * 100 + b] =
          static_cast<std::uint8_t>(round_value(i, width_of_round(i), b));
}

FpeCipher FpeCipher::from_text(std::string_view password, int rounds) {
  return FpeCipher(Bytes(password.begin(), password.end()), rounds);
}

int FpeCipher::round_value(int round, int width, int b) const {
  const std::array<std::uint8_t, 4> msg{static_cast<std::uint8_t>(round),
                                        static_cast<std::uint8_t>(width),
                                        static_cast<std::uint8_t>(b >> 8),
                                        static_cast<std::uint8_t>(b & 0xFF)};
  const auto mac = hmac_sha256(password_, msg);
  std::uint64_t y = 0;
  for (int k = 0; k < 8; ++k) y = (y << 8) | mac[k];
  return static_cast<int>(y % static_cast<std::uint64_t>(pow10(width)));
}

int FpeCipher::encrypt(int v) const {
  check_domain(v);
  int a = v / 100;
  int b = v % 100;
  for (int i = 0; i < rounds_; ++i) {
    const int m = width_of_round(i);
    const int c = (a + f(i, b)) % pow10(m);
    a = b;
    b = c;
  }
  // After an even number of rounds A holds 1 digit and B holds 2.
  return a * 100 + b;
}

int FpeCipher::decrypt(int v) const {
  check_domain(v);
  int a = v / 100;
  int b = v % 100;
  for (int i = rounds_ - 1; i >= 0; --i) {
    const int m = width_of_round(i);
    const int c = b;
    b = a;
    a = ((c - f(i, b)) % pow10(m) + pow10(m)) % pow10(m);
  }
  return a * 100 + b;
}

}  // namespace pixcrypt
