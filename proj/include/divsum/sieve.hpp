#ifndef DIVSUM_SIEVE_HPP
#define DIVSUM_SIEVE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divsum/int128.hpp"

namespace divsum {

/// Which pointwise arithmetic function a table holds.
class FunctionKind {
public:
  enum class Tag { mobius, divisor, divisor_k, divisor_squared };

  static FunctionKind mobius() { return FunctionKind(Tag::mobius, 0); }
  static FunctionKind divisor() { return FunctionKind(Tag::divisor, 2); }
  static FunctionKind divisor_k(int k);
  static FunctionKind divisor_squared() { return FunctionKind(Tag::divisor_squared, 0); }

  /// Accepts the CLI spellings `mu`, `d`, `dk:K` and `d2`.
  static FunctionKind parse(std::string_view text);

  Tag tag() const { return tag_; }
  /// Number of factors for divisor_k (2 for plain divisor, 0 otherwise).
  int k() const { return k_; }
  bool is_signed() const { return tag_ == Tag::mobius; }

  /// Value at the prime power p^e. Every kind is multiplicative.
  std::uint64_t prime_power_value(unsigned exponent) const;
  /// -1, 0 or +1 for mobius at p^e.
  int mobius_prime_power(unsigned exponent) const { return exponent == 0 ? 1 : exponent == 1 ? -1 : 0; }

  std::string name() const;

  friend bool operator==(const FunctionKind&, const FunctionKind&) = default;

private:
  FunctionKind(Tag tag, int k) : tag_(tag), k_(k) {}

  Tag tag_;
  int k_;
};

struct SieveOptions {
  /// Upper bound on table plus workspace bytes.
  std::uint64_t memory_cap_bytes = std::uint64_t{2} << 30;
  /// Limits above this are built segment by segment.
  std::uint64_t segment_threshold = 100'000'000;
  std::uint64_t segment_size = std::uint64_t{1} << 18;
};

/// Exact values of one arithmetic function on [1, limit]. Immutable once built.
class ArithmeticTable {
public:
  ArithmeticTable(FunctionKind kind, std::uint64_t limit, std::vector<std::int8_t> signs);
  ArithmeticTable(FunctionKind kind, std::uint64_t limit, std::vector<std::uint64_t> counts);

  const FunctionKind& kind() const { return kind_; }
  std::uint64_t limit() const { return limit_; }

  /// Value at n as a signed wide integer; throws CoverageError outside [1, limit].
  Int128 at(std::uint64_t n) const;
  Int128 operator[](std::uint64_t n) const { return is_signed() ? signs_[n - 1] : Int128(counts_[n - 1]); }

  bool is_signed() const { return kind_.is_signed(); }
  /// Values 1..limit (index 0 holds n = 1). Only one of the two is non-empty.
  std::span<const std::int8_t> signs() const { return signs_; }
  std::span<const std::uint64_t> counts() const { return counts_; }

private:
  FunctionKind kind_;
  std::uint64_t limit_;
  std::vector<std::int8_t> signs_;
  std::vector<std::uint64_t> counts_;
};

/// Bytes a whole table of `limit` entries occupies, excluding workspace.
std::uint64_t table_bytes(const FunctionKind& kind, std::uint64_t limit);

/// Builds the table on [1, limit]. Uses a linear smallest-prime-factor sieve below
/// the segment threshold and assembles segments above it.
ArithmeticTable sieve(const FunctionKind& kind, std::uint64_t limit, const SieveOptions& options = {});

/// Linear smallest-prime-factor sieve (one strategy of two).
ArithmeticTable sieve_linear(const FunctionKind& kind, std::uint64_t limit, const SieveOptions& options = {});

/// One segment of values: values[i] is f(first + i). Signed kinds use `signs`.
struct TableSegment {
  std::uint64_t first = 1;
  std::span<const std::int8_t> signs;
  std::span<const std::uint64_t> counts;

  std::size_t size() const { return signs.empty() ? counts.size() : signs.size(); }
  Int128 operator[](std::size_t i) const { return signs.empty() ? Int128(counts[i]) : Int128(signs[i]); }
};

/// Streams f on [1, limit] in ascending fixed-size segments using prime marking
/// (trial division by all primes up to sqrt(limit)). Memory is one segment plus
/// the base primes.
void for_each_segment(const FunctionKind& kind, std::uint64_t limit,
                      const std::function<void(const TableSegment&)>& consumer,
                      const SieveOptions& options = {});

/// Primes up to `limit` (plain Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Sum over delta^2 | n of mu(delta) * d4(n / delta^2). Equals d(n)^2.
/// Needs `d4` to cover n and `mu` to cover floor(sqrt(n)).
Int128 convolution_check(std::uint64_t n, const ArithmeticTable& d4, const ArithmeticTable& mu);

struct IdentityCheck {
  std::uint64_t limit = 0;
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  std::optional<std::uint64_t> first_failure;

  bool ok() const { return checked == passed; }
};

/// Runs convolution_check(n) == d(n)^2 for every n in [1, limit].
IdentityCheck verify_convolution(std::uint64_t limit, const SieveOptions& options = {});

/// CSV with header `n,value`, one row per n, `\n` line endings.
void write_csv(std::ostream& out, const ArithmeticTable& table);

}  // namespace divsum

#endif  // DIVSUM_SIEVE_HPP
