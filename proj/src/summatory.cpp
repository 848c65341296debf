#include "divsum/summatory.hpp"

#include <algorithm>
#include <numeric>

namespace divsum {

namespace {

void require_positive(std::uint64_t x) {
  if (x == 0) throw DomainError("x must be at least 1, got 0");
}

Int128 hyperbola_value(std::uint64_t x) {
  const std::uint64_t root = isqrt(x);
  Int128 sum = 0;
  for (std::uint64_t n = 1; n <= root; ++n) sum = checked_add(sum, Int128(x / n));
  return checked_sub(checked_mul(sum, 2), checked_mul(Int128(root), Int128(root)));
}

// Divisor sums over the quotient set of one x. d(n) and D(n) are tabulated up to
// sqrt x; D at larger quotients is memoized per slot on first use.
class DivisorSums {
public:
  DivisorSums(std::uint64_t x, const SieveOptions& options) : index_(x) {
    const std::uint64_t root = index_.root();
    auto d = sieve(FunctionKind::divisor(), root, options);
    divisor_.assign(d.counts().begin(), d.counts().end());
    prefix_.resize(root + 1, 0);
    for (std::uint64_t n = 1; n <= root; ++n) prefix_[n] = checked_add(prefix_[n - 1], Int128(divisor_[n - 1]));
    large_.assign(root + 1, 0);
  }

  std::uint64_t root() const { return index_.root(); }

  Int128 d2(std::uint64_t v) {
    if (v <= index_.root()) return prefix_[v];
    Int128& cached = large_[index_.x() / v];
    if (cached == 0) cached = hyperbola_value(v);
    return cached;
  }

  // v must lie in the quotient set of x.
  Int128 d4(std::uint64_t v) {
    const std::uint64_t r = isqrt(v);
    Int128 sum = 0;
    for (std::uint64_t n = 1; n <= r; ++n) {
      sum = checked_add(sum, checked_mul(Int128(divisor_[n - 1]), d2(v / n)));
    }
    const Int128 corner = d2(r);
    return checked_sub(checked_mul(sum, 2), checked_mul(corner, corner));
  }

private:
  QuotientIndex index_;
  std::vector<std::uint64_t> divisor_;
  std::vector<Int128> prefix_;
  std::vector<Int128> large_;
};

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::sieve:
      return "sieve";
    case Method::hyperbola:
      return "hyperbola";
    case Method::dirichlet_square:
      return "dirichlet_square";
    case Method::mobius_weighted:
      return "mobius_weighted";
    case Method::recursion:
      return "recursion";
  }
  return "unknown";
}

FloorQuotients::FloorQuotients(std::uint64_t x) : x_(x) {
  require_positive(x);
  blocks_.reserve(2 * isqrt(x));
  for_each_quotient_block(x, [this](const QuotientBlock& b) { blocks_.push_back(b); });
}

FloorQuotients floor_quotients(std::uint64_t x) { return FloorQuotients(x); }

QuotientIndex::QuotientIndex(std::uint64_t x) : x_(x), root_(isqrt(x)) { require_positive(x); }

std::vector<SummatoryValue> summatory_oracle_at(const FunctionKind& kind, std::span<const std::uint64_t> xs,
                                                const SieveOptions& options) {
  std::vector<SummatoryValue> out(xs.size());
  if (xs.empty()) return out;
  for (auto x : xs) require_positive(x);

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  const std::uint64_t limit = xs[order.back()];

  std::size_t next = 0;
  Int128 running = 0;
  for_each_segment(
      kind, limit,
      [&](const TableSegment& seg) {
        for (std::size_t i = 0; i < seg.size(); ++i) {
          running = checked_add(running, seg[i]);
          const std::uint64_t n = seg.first + i;
          while (next < order.size() && xs[order[next]] == n) {
            out[order[next]] = SummatoryValue{n, kind, running, Method::sieve};
            ++next;
          }
        }
      },
      options);
  return out;
}

SummatoryValue summatory_oracle(const FunctionKind& kind, std::uint64_t x, const SieveOptions& options) {
  const std::uint64_t xs[] = {x};
  return summatory_oracle_at(kind, xs, options).front();
}

SummatoryValue divisor_summatory_hyperbola(std::uint64_t x) {
  require_positive(x);
  return {x, FunctionKind::divisor(), hyperbola_value(x), Method::hyperbola};
}

SummatoryValue d4_summatory(std::uint64_t x, const SieveOptions& options) {
  require_positive(x);
  DivisorSums sums(x, options);
  return {x, FunctionKind::divisor_k(4), sums.d4(x), Method::dirichlet_square};
}

SummatoryValue dk_summatory_recursive(int k, std::uint64_t x) {
  require_positive(x);
  const FunctionKind kind = FunctionKind::divisor_k(k);
  if (k == 1) return {x, kind, Int128(x), Method::recursion};
  if (k == 2) {
    Int128 total = 0;
    for_each_quotient_block(x, [&](const QuotientBlock& b) {
      total = checked_add(total, checked_mul(Int128(b.length()), Int128(b.quotient)));
    });
    return {x, kind, total, Method::recursion};
  }

  const QuotientIndex index(x);
  const std::uint64_t root = index.root();
  // Every quotient of a quotient of x is a quotient of x, ascending order:
  // 1..root, then x / j for j = root..1 when it exceeds root.
  std::vector<std::uint64_t> quotients;
  quotients.reserve(2 * root);
  for (std::uint64_t v = 1; v <= root; ++v) quotients.push_back(v);
  for (std::uint64_t j = root; j >= 1; --j) {
    if (x / j > root) quotients.push_back(x / j);
  }

  // Level 1 is D_1(v) = v; each pass lifts the whole quotient set one level.
  std::vector<Int128> previous(index.slots(), 0);
  for (auto v : quotients) previous[index.slot(v)] = Int128(v);
  std::vector<Int128> current(index.slots(), 0);
  for (int level = 2; level < k; ++level) {
    for (auto v : quotients) {
      Int128 sum = 0;
      for_each_quotient_block(v, [&](const QuotientBlock& b) {
        sum = checked_add(sum, checked_mul(Int128(b.length()), previous[index.slot(b.quotient)]));
      });
      current[index.slot(v)] = sum;
    }
    std::swap(previous, current);
  }

  Int128 total = 0;
  for_each_quotient_block(x, [&](const QuotientBlock& b) {
    total = checked_add(total, checked_mul(Int128(b.length()), previous[index.slot(b.quotient)]));
  });
  return {x, kind, total, Method::recursion};
}

SummatoryValue mean_square_summatory(std::uint64_t x, const SieveOptions& options) {
  require_positive(x);
  DivisorSums sums(x, options);
  const auto mu = sieve(FunctionKind::mobius(), sums.root(), options);
  Int128 total = 0;
  for (std::uint64_t delta = 1; delta <= sums.root(); ++delta) {
    const int sign = mu.signs()[delta - 1];
    if (sign == 0) continue;
    const Int128 inner = sums.d4(x / (delta * delta));
    total = sign > 0 ? checked_add(total, inner) : checked_sub(total, inner);
  }
  return {x, FunctionKind::divisor_squared(), total, Method::mobius_weighted};
}

SummatoryValue summatory_fast(const FunctionKind& kind, std::uint64_t x, const SieveOptions& options) {
  switch (kind.tag()) {
    case FunctionKind::Tag::divisor:
      return divisor_summatory_hyperbola(x);
    case FunctionKind::Tag::divisor_squared:
      return mean_square_summatory(x, options);
    case FunctionKind::Tag::divisor_k:
      if (kind.k() == 2) {
        auto v = divisor_summatory_hyperbola(x);
        v.function = kind;
        return v;
      }
      if (kind.k() == 4) return d4_summatory(x, options);
      return dk_summatory_recursive(kind.k(), x);
    case FunctionKind::Tag::mobius:
      break;
  }
  throw DomainError("no sublinear method for " + kind.name());
}

}  // namespace divsum
