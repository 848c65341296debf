#include "divsum/asymptotic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "divsum/summatory.hpp"

namespace divsum {

namespace {

// Neumaier's variant of Kahan summation; also exact when terms exceed the running sum.
class CompensatedSum {
public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

private:
  double sum_ = 0;
  double compensation_ = 0;
};

void require_log_power(int k) {
  if (k < 0 || k > 2) throw DomainError("harmonic_log_sum supports k in {0, 1, 2}, got " + std::to_string(k));
}

double harmonic_term(std::uint64_t n, int k) {
  const double inv = 1.0 / static_cast<double>(n);
  if (k == 0) return inv;
  const double l = std::log(static_cast<double>(n));
  return k == 1 ? l * inv : l * l * inv;
}

std::vector<std::size_t> ascending_order(std::span<const std::uint64_t> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  return order;
}

int decade_of(std::uint64_t x) {
  int d = 0;
  while (x >= 10) {
    x /= 10;
    ++d;
  }
  return d;
}

double to_double(Int128 v) { return static_cast<double>(static_cast<long double>(v)); }

}  // namespace

double harmonic_log_sum(double x, int k) {
  require_log_power(k);
  if (!(x >= 1)) throw DomainError("harmonic_log_sum needs x >= 1");
  const auto n_max = static_cast<std::uint64_t>(std::floor(x));
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) sum.add(harmonic_term(n, k));
  return sum.value();
}

std::vector<double> harmonic_log_sums_at(std::span<const std::uint64_t> xs, int k) {
  require_log_power(k);
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  const auto order = ascending_order(xs);
  if (xs[order.front()] == 0) throw DomainError("harmonic_log_sum needs x >= 1");
  CompensatedSum sum;
  std::uint64_t n = 0;
  for (auto i : order) {
    while (n < xs[i]) sum.add(harmonic_term(++n, k));
    out[i] = sum.value();
  }
  return out;
}

std::vector<double> mobius_tail_partials_at(std::span<const std::uint64_t> xs, const SieveOptions& options) {
  std::vector<double> out(xs.size());
  if (xs.empty()) return out;
  const auto order = ascending_order(xs);
  if (xs[order.front()] == 0) throw DomainError("mobius_tail needs x >= 1");
  const auto mu = sieve(FunctionKind::mobius(), isqrt(xs[order.back()]), options);
  CompensatedSum sum;
  std::uint64_t delta = 0;
  for (auto i : order) {
    const std::uint64_t root = isqrt(xs[i]);
    while (delta < root) {
      ++delta;
      const int sign = mu.signs()[delta - 1];
      if (sign != 0) {
        const double d = static_cast<double>(delta);
        sum.add(sign / (d * d));
      }
    }
    out[i] = sum.value();
  }
  return out;
}

MobiusTail mobius_tail(std::uint64_t x, const SieveOptions& options) {
  const std::uint64_t xs[] = {x};
  return {mobius_tail_partials_at(xs, options).front(), constants::inverse_zeta2<double>};
}

Claim Claim::harmonic(int k) {
  require_log_power(k);
  return Claim(Tag::harmonic, k);
}

Claim Claim::parse(std::string_view text) {
  if (text == "eq4") return of(Tag::divisor);
  if (text == "eq4r") return of(Tag::divisor_refined);
  if (text == "d3") return of(Tag::d3);
  if (text == "d4") return of(Tag::d4);
  if (text == "s") return of(Tag::mean_square);
  if (text == "mobius") return of(Tag::mobius_tail);
  if (text.starts_with("eq3:") && text.size() == 5) {
    int k = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 4, text.data() + 5, k);
    if (ec == std::errc() && ptr == text.data() + 5 && k >= 0 && k <= 2) return harmonic(k);
  }
  throw DomainError("unknown envelope claim: " + std::string(text));
}

std::string Claim::name() const {
  switch (tag_) {
    case Tag::harmonic:
      return "eq3:" + std::to_string(k_);
    case Tag::divisor:
      return "eq4";
    case Tag::divisor_refined:
      return "eq4r";
    case Tag::d3:
      return "d3";
    case Tag::d4:
      return "d4";
    case Tag::mean_square:
      return "s";
    case Tag::mobius_tail:
      return "mobius";
  }
  return {};
}

EnvelopeReport envelope(const Claim& claim, std::span<const std::uint64_t> xs, const SieveOptions& options) {
  if (xs.size() < 2) throw DomainError("envelope needs at least 2 samples");
  std::vector<std::uint64_t> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == 0) throw DomainError("envelope samples must be >= 1");

  EnvelopeReport report;
  report.claim = claim;

  // Exact sides that come from one pass over all samples.
  std::vector<double> batched;
  if (claim.tag() == Claim::Tag::harmonic) batched = harmonic_log_sums_at(sorted, claim.k());
  if (claim.tag() == Claim::Tag::mobius_tail) batched = mobius_tail_partials_at(sorted, options);

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::uint64_t x = sorted[i];
    const double xr = static_cast<double>(x);
    const double l = std::log(xr);
    EnvelopeSample s{x, 0, std::nullopt, 0, 0, 0};
    switch (claim.tag()) {
      case Claim::Tag::harmonic:
        s.exact = batched[i];
        s.main = harmonic_log_main(xr, claim.k());
        s.normalizer = 1;
        break;
      case Claim::Tag::divisor:
      case Claim::Tag::divisor_refined: {
        const bool refined = claim.tag() == Claim::Tag::divisor_refined;
        s.exact_integer = divisor_summatory_hyperbola(x).value;
        s.main = divisor_main(xr, refined);
        s.normalizer = refined ? std::sqrt(xr) : xr;
        break;
      }
      case Claim::Tag::d3:
        s.normalizer = xr * l;
        if (s.normalizer > 0) s.exact_integer = dk_summatory_recursive(3, x).value;
        s.main = 0.5 * xr * l * l;
        break;
      case Claim::Tag::d4:
        s.normalizer = xr * l * l;
        if (s.normalizer > 0) s.exact_integer = d4_summatory(x, options).value;
        s.main = xr * l * l * l / 6;
        break;
      case Claim::Tag::mean_square:
        s.normalizer = xr * l * l;
        if (s.normalizer > 0) s.exact_integer = mean_square_summatory(x, options).value;
        s.main = mean_square_main(xr);
        break;
      case Claim::Tag::mobius_tail:
        s.exact = batched[i];
        s.main = constants::inverse_zeta2<double>;
        s.normalizer = 1 / std::sqrt(xr);
        break;
    }
    if (!(s.normalizer > 0)) {
      report.rejected.push_back("x=" + std::to_string(x) + ": normalizer for " + claim.name() + " is zero");
      continue;
    }
    if (s.exact_integer) {
      // Subtract in extended precision before rounding the difference.
      s.exact = to_double(*s.exact_integer);
      s.ratio = static_cast<double>(std::abs(static_cast<long double>(*s.exact_integer) - static_cast<long double>(s.main)) /
                                    static_cast<long double>(s.normalizer));
    } else {
      s.ratio = std::abs(s.exact - s.main) / s.normalizer;
    }
    report.samples.push_back(s);
  }

  for (const auto& s : report.samples) {
    report.sup_ratio = std::max(report.sup_ratio, s.ratio);
    const int decade = decade_of(s.x);
    if (report.trend.empty() || report.trend.back().decade != decade) {
      report.trend.push_back({decade, s.ratio});
    } else {
      report.trend.back().max_ratio = std::max(report.trend.back().max_ratio, s.ratio);
    }
  }
  return report;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t x_min, std::uint64_t x_max, int points) {
  if (points < 2) throw DomainError("grid needs at least 2 points");
  if (x_min < 1 || x_max <= x_min) throw DomainError("grid needs 1 <= x_min < x_max");
  std::vector<std::uint64_t> grid;
  grid.reserve(static_cast<std::size_t>(points));
  const long double lo = std::log(static_cast<long double>(x_min));
  const long double step = (std::log(static_cast<long double>(x_max)) - lo) / (points - 1);
  grid.push_back(x_min);
  for (int i = 1; i + 1 < points; ++i) {
    const auto v = static_cast<std::uint64_t>(std::llround(std::exp(lo + step * i)));
    grid.push_back(std::clamp(v, x_min, x_max));
  }
  grid.push_back(x_max);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

FitReport fit_log_poly(std::span<const FitSample> samples) {
  std::map<std::uint64_t, Int128> unique;
  for (const auto& s : samples) {
    if (s.x < 2) throw DomainError("fit samples need x >= 2, got " + std::to_string(s.x));
    auto [it, inserted] = unique.emplace(s.x, s.value);
    if (!inserted && it->second != s.value) {
      throw DomainError("conflicting values for repeated sample x=" + std::to_string(s.x));
    }
  }
  if (unique.size() < 8) throw DomainError("fit needs at least 8 distinct samples, got " + std::to_string(unique.size()));
  const std::uint64_t x_min = unique.begin()->first;
  const std::uint64_t x_max = unique.rbegin()->first;
  if (static_cast<long double>(x_max) < 1000.0L * static_cast<long double>(x_min)) {
    throw DomainError("fit samples must span at least 3 decades");
  }

  // Solved in extended precision: expanding around the centre amplifies solver error by up to centre^3.
  using Ld = long double;
  using MatrixLd = Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorLd = Eigen::Matrix<Ld, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(unique.size());
  VectorLd logs(n);
  VectorLd target(n);
  std::vector<std::uint64_t> xs;
  xs.reserve(unique.size());
  Eigen::Index row = 0;
  for (const auto& [x, value] : unique) {
    logs(row) = std::log(static_cast<Ld>(x));
    target(row) = static_cast<Ld>(value) / static_cast<Ld>(x);
    xs.push_back(x);
    ++row;
  }

  const Ld center = logs.mean();
  MatrixLd basis(n, 4);
  const Eigen::Array<Ld, Eigen::Dynamic, 1> t = logs.array() - center;
  basis.col(0).setOnes();
  basis.col(1) = t.matrix();
  basis.col(2) = t.square().matrix();
  basis.col(3) = t.cube().matrix();

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis.cast<double>());
  const auto& sigma = svd.singularValues();
  const double condition = sigma(sigma.size() - 1) > 0 ? sigma(0) / sigma(sigma.size() - 1)
                                                       : std::numeric_limits<double>::infinity();
  const Eigen::ColPivHouseholderQR<MatrixLd> qr(basis);
  if (qr.rank() < 4 || !(condition <= max_fit_condition)) {
    throw ConditioningError("log-power basis is rank deficient or badly conditioned", condition);
  }
  const VectorLd centered = qr.solve(target);

  // sum_j b_j (L - c)^j  ->  sum_i a_i L^i with a_i = sum_{j >= i} b_j C(j, i) (-c)^{j - i}
  Eigen::Matrix<Ld, 4, 1> expanded = Eigen::Matrix<Ld, 4, 1>::Zero();
  const int binomial[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i <= j; ++i) {
      expanded(i) += centered(j) * binomial[j][i] * std::pow(-center, j - i);
    }
  }
  const Eigen::Vector4d raw = expanded.cast<double>();

  FitReport report;
  report.model = AsymptoticModel<double>(raw);
  report.x_min = x_min;
  report.x_max = x_max;
  report.count = unique.size();
  report.xs = std::move(xs);
  report.condition = condition;
  const Eigen::VectorXd residuals = (target - basis * centered).cast<double>();
  report.residuals.assign(residuals.data(), residuals.data() + residuals.size());
  report.max_abs_residual = residuals.cwiseAbs().maxCoeff();
  return report;
}

}  // namespace divsum
