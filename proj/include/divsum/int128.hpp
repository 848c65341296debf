#ifndef DIVSUM_INT128_HPP
#define DIVSUM_INT128_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "divsum/errors.hpp"

namespace divsum {

using Int128 = __int128;
using UInt128 = unsigned __int128;

inline Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
  return r;
}

inline Int128 checked_sub(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit subtraction overflow");
  return r;
}

inline Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit multiplication overflow");
  return r;
}

/// floor(sqrt(n)) by integer Newton iteration. Exact at perfect squares.
inline std::uint64_t isqrt(std::uint64_t n) {
  if (n < 2) return n;
  // Start above the root: 2^ceil(bits/2) > sqrt(n).
  int bits = 64 - __builtin_clzll(n);
  std::uint64_t r = std::uint64_t{1} << ((bits + 1) / 2);
  for (;;) {
    std::uint64_t next = (r + n / r) / 2;
    if (next >= r) break;
    r = next;
  }
  // Newton from above lands on floor(sqrt(n)); the correction guards the invariant.
  while (static_cast<UInt128>(r) * r > n) --r;
  while (static_cast<UInt128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::string to_string(Int128 v) {
  if (v == 0) return "0";
  bool negative = v < 0;
  UInt128 u = negative ? UInt128(0) - static_cast<UInt128>(v) : static_cast<UInt128>(v);
  std::string digits;
  while (u != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

/// Parses an optionally signed decimal integer; throws DomainError on junk or overflow.
inline Int128 parse_int128(std::string_view s) {
  if (s.empty()) throw DomainError("empty integer literal");
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw DomainError("integer literal has no digits");
  Int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw DomainError("bad digit in integer literal: " + std::string(s));
    int digit = s[i] - '0';
    if (__builtin_mul_overflow(v, 10, &v) ||
        __builtin_add_overflow(v, negative ? -digit : digit, &v)) {
      throw DomainError("integer literal out of 128-bit range: " + std::string(s));
    }
  }
  return v;
}

}  // namespace divsum

#endif  // DIVSUM_INT128_HPP
