#ifndef DIVSUM_ASYMPTOTIC_HPP
#define DIVSUM_ASYMPTOTIC_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "divsum/int128.hpp"
#include "divsum/sieve.hpp"

namespace divsum {

namespace constants {
template <typename Scalar>
inline constexpr Scalar pi = Scalar(3.141592653589793238462643383279502884L);
template <typename Scalar>
inline constexpr Scalar euler_gamma = Scalar(0.577215664901532860606512090082402431L);
/// 1 / zeta(2)
template <typename Scalar>
inline constexpr Scalar inverse_zeta2 = Scalar(6) / (pi<Scalar> * pi<Scalar>);
}  // namespace constants

/// ln^{k+1}(x) / (k + 1)
template <typename Scalar>
Scalar harmonic_log_main(Scalar x, int k) {
  using std::log;
  using std::pow;
  return pow(log(x), Scalar(k + 1)) / Scalar(k + 1);
}

/// x ln x, plus (2 gamma - 1) x when refined.
template <typename Scalar>
Scalar divisor_main(Scalar x, bool refined = false) {
  using std::log;
  Scalar main = x * log(x);
  if (refined) main += (Scalar(2) * constants::euler_gamma<Scalar> - Scalar(1)) * x;
  return main;
}

/// x ln^3 x / pi^2
template <typename Scalar>
Scalar mean_square_main(Scalar x) {
  using std::log;
  const Scalar l = log(x);
  return x * l * l * l / (constants::pi<Scalar> * constants::pi<Scalar>);
}

/// x * (a3 ln^3 x + a2 ln^2 x + a1 ln x + a0). Coefficients are stored by power of ln x.
template <typename Scalar>
struct AsymptoticModel {
  using Coefficients = Eigen::Matrix<Scalar, 4, 1>;

  Coefficients coefficients = Coefficients::Zero();

  AsymptoticModel() = default;
  explicit AsymptoticModel(const Coefficients& c) : coefficients(c) {}
  AsymptoticModel(Scalar a3, Scalar a2, Scalar a1, Scalar a0) { coefficients << a0, a1, a2, a3; }

  Scalar a3() const { return coefficients(3); }
  Scalar a2() const { return coefficients(2); }
  Scalar a1() const { return coefficients(1); }
  Scalar a0() const { return coefficients(0); }

  /// The bracket alone, i.e. model(x) / x.
  Scalar per_unit(Scalar x) const {
    using std::log;
    const Scalar l = log(x);
    return ((a3() * l + a2()) * l + a1()) * l + a0();
  }

  Scalar operator()(Scalar x) const { return x * per_unit(x); }

  friend AsymptoticModel operator*(Scalar c, const AsymptoticModel& m) { return AsymptoticModel(Coefficients(c * m.coefficients)); }
};

/// Leading-term-only model with A = 1/pi^2.
template <typename Scalar>
AsymptoticModel<Scalar> mean_square_leading_model() {
  return AsymptoticModel<Scalar>(Scalar(1) / (constants::pi<Scalar> * constants::pi<Scalar>), 0, 0, 0);
}

/// sum_{n <= x} ln^k(n) / n for k in {0, 1, 2}, Neumaier-compensated.
double harmonic_log_sum(double x, int k);

/// harmonic_log_sum at each x (any order) from one pass.
std::vector<double> harmonic_log_sums_at(std::span<const std::uint64_t> xs, int k);

struct MobiusTail {
  double partial;  ///< sum_{delta <= sqrt x} mu(delta) / delta^2
  double limit;    ///< 6 / pi^2
};

MobiusTail mobius_tail(std::uint64_t x, const SieveOptions& options = {});

/// mobius_tail partials at each x from one sieve.
std::vector<double> mobius_tail_partials_at(std::span<const std::uint64_t> xs, const SieveOptions& options = {});

/// The estimates whose error envelopes can be sampled.
class Claim {
public:
  enum class Tag {
    harmonic,         ///< sum ln^k n / n vs ln^{k+1} x / (k+1), normalizer 1
    divisor,          ///< D(x) vs x ln x, normalizer x
    divisor_refined,  ///< D(x) vs x ln x + (2 gamma - 1) x, normalizer sqrt x
    d3,               ///< D3(y) vs y ln^2 y / 2, normalizer y ln y
    d4,               ///< D4(y) vs y ln^3 y / 6, normalizer y ln^2 y
    mean_square,      ///< S(x) vs x ln^3 x / pi^2, normalizer x ln^2 x
    mobius_tail,      ///< tail partial vs 6 / pi^2, normalizer x^{-1/2}
  };

  static Claim harmonic(int k);
  static Claim of(Tag tag) { return Claim(tag, 0); }
  /// `eq3:K`, `eq4`, `eq4r`, `d3`, `d4`, `s`, `mobius`.
  static Claim parse(std::string_view text);

  Tag tag() const { return tag_; }
  int k() const { return k_; }
  std::string name() const;

private:
  Claim(Tag tag, int k) : tag_(tag), k_(k) {}
  Tag tag_;
  int k_;
};

struct EnvelopeSample {
  std::uint64_t x;
  double exact;
  std::optional<Int128> exact_integer;  ///< set when the exact side is an integer
  double main;
  double normalizer;
  double ratio;
};

struct DecadeMax {
  int decade;  ///< floor(log10 x)
  double max_ratio;
};

struct EnvelopeReport {
  Claim claim = Claim::of(Claim::Tag::divisor);
  std::vector<EnvelopeSample> samples;  ///< sorted by x
  double sup_ratio = 0;
  std::vector<DecadeMax> trend;
  std::vector<std::string> rejected;  ///< diagnostics for dropped samples
};

/// Samples |exact - main| / normalizer at each x. Needs at least two samples;
/// samples where the normalizer vanishes are dropped with a diagnostic.
EnvelopeReport envelope(const Claim& claim, std::span<const std::uint64_t> xs, const SieveOptions& options = {});

/// Geometrically spaced integers from x_min to x_max inclusive, duplicates removed.
std::vector<std::uint64_t> geometric_grid(std::uint64_t x_min, std::uint64_t x_max, int points);

struct FitSample {
  std::uint64_t x;
  Int128 value;
};

struct FitReport {
  AsymptoticModel<double> model;
  std::uint64_t x_min = 0;
  std::uint64_t x_max = 0;
  std::size_t count = 0;
  std::vector<std::uint64_t> xs;
  std::vector<double> residuals;  ///< (exact - model) / x at each fitted sample
  double max_abs_residual = 0;
  double condition = 0;  ///< 2-norm condition number of the centered basis
};

/// Condition numbers above this are rejected.
inline constexpr double max_fit_condition = 1e10;

/// Least squares fit of value / x against powers of ln x up to 3, on a basis
/// centered at the mean of ln x. Repeated x values are fitted once.
FitReport fit_log_poly(std::span<const FitSample> samples);

}  // namespace divsum

#endif  // DIVSUM_ASYMPTOTIC_HPP
