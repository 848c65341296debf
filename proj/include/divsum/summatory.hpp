#ifndef DIVSUM_SUMMATORY_HPP
#define DIVSUM_SUMMATORY_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "divsum/int128.hpp"
#include "divsum/sieve.hpp"

namespace divsum {

enum class Method { sieve, hyperbola, dirichlet_square, mobius_weighted, recursion };

std::string_view method_name(Method method);

/// Exact F(x) = sum_{n <= x} f(n) tagged with the algorithm that produced it.
struct SummatoryValue {
  std::uint64_t x = 0;
  FunctionKind function = FunctionKind::divisor();
  Int128 value = 0;
  Method method = Method::sieve;
};

/// Maximal run [first, last] of n on which floor(x / n) == quotient.
struct QuotientBlock {
  std::uint64_t quotient;
  std::uint64_t first;
  std::uint64_t last;

  std::uint64_t length() const { return last - first + 1; }
  friend bool operator==(const QuotientBlock&, const QuotientBlock&) = default;
};

/// Calls f(block) for each block of floor(x / n), n ascending.
template <typename F>
void for_each_quotient_block(std::uint64_t x, F&& f) {
  for (std::uint64_t n = 1; n <= x;) {
    const std::uint64_t q = x / n;
    const std::uint64_t last = x / q;
    f(QuotientBlock{q, n, last});
    n = last + 1;
  }
}

/// The distinct values of floor(x / n), n = 1..x, with their index ranges.
/// Blocks partition [1, x] and their quotients strictly decrease.
class FloorQuotients {
public:
  explicit FloorQuotients(std::uint64_t x);

  std::uint64_t x() const { return x_; }
  std::span<const QuotientBlock> blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

private:
  std::uint64_t x_;
  std::vector<QuotientBlock> blocks_;
};

FloorQuotients floor_quotients(std::uint64_t x);

/// Dense index over the quotient set {floor(x / n)} of a fixed x: values up to
/// floor(sqrt x) map to themselves, larger values v map through x / v.
class QuotientIndex {
public:
  explicit QuotientIndex(std::uint64_t x);

  std::uint64_t x() const { return x_; }
  std::uint64_t root() const { return root_; }
  /// Upper bound on slots; some large slots may alias small ones and stay unused.
  std::size_t slots() const { return 2 * root_ + 1; }
  /// Slot of v; v must itself be floor(x / n) for some n.
  std::size_t slot(std::uint64_t v) const { return v <= root_ ? v : root_ + x_ / v; }

private:
  std::uint64_t x_;
  std::uint64_t root_;
};

/// Prefix sum of a sieved table; method = sieve.
SummatoryValue summatory_oracle(const FunctionKind& kind, std::uint64_t x, const SieveOptions& options = {});

/// Oracle prefix sums at every x in `xs` from one streaming pass. Result order matches `xs`.
std::vector<SummatoryValue> summatory_oracle_at(const FunctionKind& kind, std::span<const std::uint64_t> xs,
                                                const SieveOptions& options = {});

/// D(x) = 2 * sum_{n <= sqrt x} floor(x / n) - floor(sqrt x)^2 in O(sqrt x).
SummatoryValue divisor_summatory_hyperbola(std::uint64_t x);

/// D4(x) = 2 * sum_{n <= sqrt x} d(n) D(x / n) - D(sqrt x)^2, from d4 = d * d.
SummatoryValue d4_summatory(std::uint64_t x, const SieveOptions& options = {});

/// D_k(x) = sum over quotient blocks of x of (block length) * D_{k-1}(quotient), D_1(x) = x.
SummatoryValue dk_summatory_recursive(int k, std::uint64_t x);

/// S(x) = sum_{n <= x} d(n)^2 = sum_{delta <= sqrt x} mu(delta) * D4(x / delta^2).
SummatoryValue mean_square_summatory(std::uint64_t x, const SieveOptions& options = {});

/// Picks the sublinear method for a function: hyperbola for d, d4 via d*d, the
/// Moebius-weighted formula for d^2, recursion for other d_k. Mu has no fast path.
SummatoryValue summatory_fast(const FunctionKind& kind, std::uint64_t x, const SieveOptions& options = {});

}  // namespace divsum

#endif  // DIVSUM_SUMMATORY_HPP
