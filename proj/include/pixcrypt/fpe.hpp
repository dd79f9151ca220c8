#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pixcrypt/keystream.hpp"

namespace pixcrypt {

// Format-preserving Feistel cipher on 3-digit decimal numerals (0..999).
//
// The numeral is split into A (1 digit) and B (2 digits). Round i maps
// (A, B) -> (B, C) with C = (A + F(i, B)) mod 10^m, where m = 1 on even
// rounds and 2 on odd rounds, so the split alternates 1|2 and 2|1 and is
// restored after an even number of rounds.
//
// F(i, B) = first 8 bytes (big-endian) of
//           HMAC-SHA256(password, [i, m, B >> 8, B & 0xff])   mod 10^m
//
// No cycle walking: pixel values 0..255 may encrypt to anything in 0..999.
class FpeCipher {
 public:
  static constexpr int kRadix = 10;
  static constexpr int kDigits = 3;
  static constexpr int kDomain = 1000;
  static constexpr int kDefaultRounds = 10;

  /// Throws InvalidKeyError on an empty password, DomainError on odd or
  /// non-positive round counts.
  explicit FpeCipher(Bytes password, int rounds = kDefaultRounds);
  static FpeCipher from_text(std::string_view password, int rounds = kDefaultRounds);

  int encrypt(int v) const;
  int decrypt(int v) const;

  int rounds() const noexcept { return rounds_; }

 private:
  int round_value(int round, int width, int b) const;
  int f(int round, int b) const { return table_[static_cast<std::size_t>(round) * 100 + b]; }

  Bytes password_;
  int rounds_;
  std::vector<std::uint8_t> table_;  // F(i, B) for every round and B < 100
};

}  // namespace pixcrypt
