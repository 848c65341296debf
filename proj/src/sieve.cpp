#include "divsum/sieve.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>

namespace divsum {

namespace {

std::string bytes_text(std::uint64_t bytes) { return std::to_string(bytes) + " bytes"; }

void require_within_cap(std::uint64_t needed, const SieveOptions& options, std::string_view what) {
  if (needed > options.memory_cap_bytes) {
    throw SizingError(std::string(what) + " needs " + bytes_text(needed) + ", exceeds memory cap of " +
                      bytes_text(options.memory_cap_bytes));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

void require_positive(std::uint64_t limit) {
  if (limit == 0) throw SizingError("table limit must be at least 1, got 0");
}

}  // namespace

FunctionKind FunctionKind::divisor_k(int k) {
  if (k < 1) throw DomainError("divisor_k needs k >= 1, got " + std::to_string(k));
  return FunctionKind(Tag::divisor_k, k);
}

FunctionKind FunctionKind::parse(std::string_view text) {
  if (text == "mu") return mobius();
  if (text == "d") return divisor();
  if (text == "d2") return divisor_squared();
  if (text.starts_with("dk:")) {
    auto digits = text.substr(3);
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw DomainError("bad dk selector: " + std::string(text));
    }
    return divisor_k(k);
  }
  throw DomainError("unknown function selector: " + std::string(text));
}

std::uint64_t FunctionKind::prime_power_value(unsigned exponent) const {
  switch (tag_) {
    case Tag::mobius:
      return exponent <= 1 ? 1 : 0;
    case Tag::divisor:
      return exponent + 1;
    case Tag::divisor_squared:
      return checked_mul(std::uint64_t{exponent} + 1, std::uint64_t{exponent} + 1);
    case Tag::divisor_k: {
      // C(e + k - 1, k - 1), built as C(e + i, i) = C(e + i - 1, i - 1) * (e + i) / i.
      UInt128 c = 1;
      for (int i = 1; i < k_; ++i) {
        c = c * (exponent + static_cast<unsigned>(i)) / static_cast<unsigned>(i);
        if (c > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("d_k prime-power value exceeds 64 bits");
      }
      return static_cast<std::uint64_t>(c);
    }
  }
  return 0;
}

std::string FunctionKind::name() const {
  switch (tag_) {
    case Tag::mobius:
      return "mu";
    case Tag::divisor:
      return "d";
    case Tag::divisor_squared:
      return "d2";
    case Tag::divisor_k:
      return "dk:" + std::to_string(k_);
  }
  return {};
}

ArithmeticTable::ArithmeticTable(FunctionKind kind, std::uint64_t limit, std::vector<std::int8_t> signs)
    : kind_(kind), limit_(limit), signs_(std::move(signs)) {
  if (!kind_.is_signed() || signs_.size() != limit_) throw DomainError("signed table shape mismatch");
}

ArithmeticTable::ArithmeticTable(FunctionKind kind, std::uint64_t limit, std::vector<std::uint64_t> counts)
    : kind_(kind), limit_(limit), counts_(std::move(counts)) {
  if (kind_.is_signed() || counts_.size() != limit_) throw DomainError("unsigned table shape mismatch");
}

Int128 ArithmeticTable::at(std::uint64_t n) const {
  if (n == 0 || n > limit_) {
    throw CoverageError(kind_.name() + " table covers [1, " + std::to_string(limit_) + "], asked for " +
                        std::to_string(n));
  }
  return (*this)[n];
}

std::uint64_t table_bytes(const FunctionKind& kind, std::uint64_t limit) {
  return saturating_mul(limit, kind.is_signed() ? sizeof(std::int8_t) : sizeof(std::uint64_t));
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(std::size_t{limit} + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

ArithmeticTable sieve_linear(const FunctionKind& kind, std::uint64_t limit, const SieveOptions& options) {
  require_positive(limit);
  if (limit >= std::numeric_limits<std::uint32_t>::max()) {
    throw SizingError("linear sieve limit " + std::to_string(limit) + " exceeds 32-bit index range");
  }
  // lowest prime (4), lowest prime power (4), its exponent (1)
  constexpr std::uint64_t workspace_per_entry = 9;
  require_within_cap(table_bytes(kind, limit) + saturating_mul(limit + 1, workspace_per_entry), options,
                     kind.name() + " table of " + std::to_string(limit) + " entries");

  const auto n_max = static_cast<std::uint32_t>(limit);
  std::vector<std::uint32_t> lowest(std::size_t{n_max} + 1, 0);
  std::vector<std::uint32_t> lowest_power(std::size_t{n_max} + 1, 0);
  std::vector<std::uint8_t> exponent(std::size_t{n_max} + 1, 0);
  std::vector<std::uint32_t> primes;

  std::vector<std::int8_t> signs;
  std::vector<std::uint64_t> counts;
  if (kind.is_signed()) {
    signs.assign(limit, 0);
    signs[0] = 1;
  } else {
    counts.assign(limit, 0);
    counts[0] = 1;
  }

  // Prime-power values indexed by exponent; exponents stay below 64.
  std::vector<std::uint64_t> power_value;
  std::vector<int> power_sign;
  for (unsigned e = 0; e < 64; ++e) {
    power_sign.push_back(kind.mobius_prime_power(e));
    power_value.push_back(kind.is_signed() ? 0 : kind.prime_power_value(e));
  }

  for (std::uint32_t i = 2; i <= n_max; ++i) {
    if (lowest[i] == 0) {
      lowest[i] = i;
      lowest_power[i] = i;
      exponent[i] = 1;
      primes.push_back(i);
    }
    const std::uint32_t rest = i / lowest_power[i];
    if (kind.is_signed()) {
      signs[i - 1] = static_cast<std::int8_t>(signs[rest - 1] * power_sign[exponent[i]]);
    } else {
      counts[i - 1] = checked_mul(counts[rest - 1], power_value[exponent[i]]);
    }
    for (std::uint32_t p : primes) {
      if (p > lowest[i] || std::uint64_t{p} * i > n_max) break;
      const std::uint32_t m = p * i;
      lowest[m] = p;
      if (p == lowest[i]) {
        lowest_power[m] = lowest_power[i] * p;
        exponent[m] = static_cast<std::uint8_t>(exponent[i] + 1);
      } else {
        lowest_power[m] = p;
        exponent[m] = 1;
      }
    }
  }

  if (kind.is_signed()) return ArithmeticTable(kind, limit, std::move(signs));
  return ArithmeticTable(kind, limit, std::move(counts));
}

void for_each_segment(const FunctionKind& kind, std::uint64_t limit,
                      const std::function<void(const TableSegment&)>& consumer, const SieveOptions& options) {
  require_positive(limit);
  if (options.segment_size == 0) throw DomainError("segment size must be positive");
  const std::uint64_t root = isqrt(limit);
  if (root >= std::numeric_limits<std::uint32_t>::max()) throw SizingError("segmented sieve limit too large");
  const std::uint64_t segment = std::min(options.segment_size, limit);
  // remaining cofactor (8) + value (8) per slot, plus base primes
  require_within_cap(saturating_mul(segment, 16) + saturating_mul(root, 4), options,
                     kind.name() + " segment of " + std::to_string(segment) + " entries");

  const auto primes = primes_up_to(static_cast<std::uint32_t>(root));
  std::vector<std::uint64_t> cofactor(segment);
  std::vector<std::uint64_t> counts;
  std::vector<std::int8_t> signs;
  if (kind.is_signed()) {
    signs.resize(segment);
  } else {
    counts.resize(segment);
  }
  const std::uint64_t prime_value = kind.is_signed() ? 0 : kind.prime_power_value(1);

  for (std::uint64_t lo = 1; lo <= limit; lo += segment) {
    const std::uint64_t len = std::min(segment, limit - lo + 1);
    const std::uint64_t hi = lo + len - 1;
    for (std::uint64_t i = 0; i < len; ++i) {
      cofactor[i] = lo + i;
      if (kind.is_signed()) {
        signs[i] = 1;
      } else {
        counts[i] = 1;
      }
    }
    for (std::uint32_t p : primes) {
      if (std::uint64_t{p} * p > hi) break;
      std::uint64_t start = (lo + p - 1) / p * p;
      for (std::uint64_t m = start; m <= hi; m += p) {
        const std::uint64_t i = m - lo;
        unsigned e = 0;
        while (cofactor[i] % p == 0) {
          cofactor[i] /= p;
          ++e;
        }
        if (kind.is_signed()) {
          signs[i] = static_cast<std::int8_t>(signs[i] * kind.mobius_prime_power(e));
        } else {
          counts[i] = checked_mul(counts[i], kind.prime_power_value(e));
        }
      }
    }
    // Whatever survives trial division by primes <= sqrt(n) is a single prime.
    for (std::uint64_t i = 0; i < len; ++i) {
      if (cofactor[i] == 1) continue;
      if (kind.is_signed()) {
        signs[i] = static_cast<std::int8_t>(-signs[i]);
      } else {
        counts[i] = checked_mul(counts[i], prime_value);
      }
    }
    TableSegment view;
    view.first = lo;
    if (kind.is_signed()) {
      view.signs = std::span<const std::int8_t>(signs.data(), len);
    } else {
      view.counts = std::span<const std::uint64_t>(counts.data(), len);
    }
    consumer(view);
  }
}

ArithmeticTable sieve(const FunctionKind& kind, std::uint64_t limit, const SieveOptions& options) {
  require_positive(limit);
  if (limit <= options.segment_threshold) return sieve_linear(kind, limit, options);

  require_within_cap(table_bytes(kind, limit), options,
                     kind.name() + " table of " + std::to_string(limit) + " entries");
  std::vector<std::int8_t> signs;
  std::vector<std::uint64_t> counts;
  if (kind.is_signed()) {
    signs.reserve(limit);
  } else {
    counts.reserve(limit);
  }
  // The segment workspace is accounted separately from the assembled table.
  SieveOptions segment_options = options;
  segment_options.memory_cap_bytes = options.memory_cap_bytes - table_bytes(kind, limit);
  for_each_segment(
      kind, limit,
      [&](const TableSegment& seg) {
        signs.insert(signs.end(), seg.signs.begin(), seg.signs.end());
        counts.insert(counts.end(), seg.counts.begin(), seg.counts.end());
      },
      segment_options);
  if (kind.is_signed()) return ArithmeticTable(kind, limit, std::move(signs));
  return ArithmeticTable(kind, limit, std::move(counts));
}

Int128 convolution_check(std::uint64_t n, const ArithmeticTable& d4, const ArithmeticTable& mu) {
  if (n == 0) throw DomainError("convolution_check needs n >= 1");
  if (d4.kind() != FunctionKind::divisor_k(4)) throw DomainError("convolution_check needs a dk:4 table");
  if (mu.kind() != FunctionKind::mobius()) throw DomainError("convolution_check needs a mu table");
  if (n > d4.limit()) {
    throw CoverageError("dk:4 table covers [1, " + std::to_string(d4.limit()) + "], need " + std::to_string(n));
  }
  const std::uint64_t root = isqrt(n);
  if (root > mu.limit()) {
    throw CoverageError("mu table covers [1, " + std::to_string(mu.limit()) + "], need " + std::to_string(root));
  }
  Int128 total = 0;
  for (std::uint64_t delta = 1; delta <= root; ++delta) {
    const std::uint64_t square = delta * delta;
    if (n % square != 0) continue;
    total = checked_add(total, checked_mul(mu[delta], d4[n / square]));
  }
  return total;
}

IdentityCheck verify_convolution(std::uint64_t limit, const SieveOptions& options) {
  const auto d4 = sieve(FunctionKind::divisor_k(4), limit, options);
  const auto d = sieve(FunctionKind::divisor(), limit, options);
  const auto mu = sieve(FunctionKind::mobius(), std::max<std::uint64_t>(isqrt(limit), 1), options);
  IdentityCheck check;
  check.limit = limit;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    ++check.checked;
    const Int128 dn = d[n];
    if (convolution_check(n, d4, mu) == dn * dn) {
      ++check.passed;
    } else if (!check.first_failure) {
      check.first_failure = n;
    }
  }
  return check;
}

void write_csv(std::ostream& out, const ArithmeticTable& table) {
  out << "n,value\n";
  for (std::uint64_t n = 1; n <= table.limit(); ++n) {
    out << n << ',' << to_string(table[n]) << '\n';
  }
}

}  // namespace divsum
