// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "divsum/asymptotic.hpp"
#include "divsum/sieve.hpp"
#include "divsum/summatory.hpp"

using namespace divsum;

namespace {

// Pinned from oracle runs (sieve prefix sums of d^2 and compensated harmonic sums).
// Fitted a3 on 16 geometric samples over [1e4, 1e7] of sieve-exact S(x).
constexpr double fitted_a3_oracle = 0.10102771950124996;
constexpr double fitted_a3_drift = 1e-9;
// Observed |a3 - 1/pi^2| = 2.93e-4.
constexpr double a3_band = 1e-3;
// Observed sup 0.8736 (at x = 1e3) over 41 geometric samples of [1e3, 1e7].
constexpr double mean_square_envelope_bound = 1.0;
// Observed sups over every integer x <= 1e7: 1 (x = 1), 0.1093 (x = 2), 0.2610 (x = 2).
constexpr double harmonic_bound[3] = {1.0, 0.15, 0.3};
constexpr double gamma_tolerance = 1e-3;
// Observed max |partial - 6/pi^2| * sqrt(x) = 0.0882 over 161 geometric samples of [1e2, 1e10].
constexpr double mobius_tail_constant = 0.1;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> check;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::uint64_t> one_to(std::uint64_t n) {
  std::vector<std::uint64_t> xs(n);
  for (std::uint64_t i = 0; i < n; ++i) xs[i] = i + 1;
  return xs;
}

Outcome convolution_identity() {
  const auto check = verify_convolution(100000);
  return {check.ok() && check.checked == 100000,
          std::to_string(check.passed) + "/" + std::to_string(check.checked) + " n <= 1e5"};
}

Outcome hyperbola_correctness() {
  const auto xs = one_to(100000);
  const auto oracle = summatory_oracle_at(FunctionKind::divisor(), xs);
  std::uint64_t mismatches = 0;
  for (std::uint64_t x = 1; x <= 100000; ++x) {
    if (divisor_summatory_hyperbola(x).value != oracle[x - 1].value) ++mismatches;
  }
  auto samples = geometric_grid(100000, 100'000'000, 25);
  const auto far = summatory_oracle_at(FunctionKind::divisor(), samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (divisor_summatory_hyperbola(samples[i]).value != far[i].value) ++mismatches;
  }
  return {mismatches == 0, "exhaustive x <= 1e5 + " + std::to_string(samples.size()) +
                               " geometric samples to 1e8, mismatches " + std::to_string(mismatches)};
}

Outcome mean_square_fast_path() {
  const std::vector<std::uint64_t> xs = {1000, 10000, 100000, 1000000};
  const auto oracle = summatory_oracle_at(FunctionKind::divisor_squared(), xs);
  bool ok = to_string(mean_square_summatory(10).value) == "83";
  std::string detail = "S(10)=" + to_string(mean_square_summatory(10).value);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto fast = mean_square_summatory(xs[i]).value;
    ok = ok && fast == oracle[i].value;
    detail += " S(" + std::to_string(xs[i]) + ")=" + to_string(fast);
  }
  return {ok, detail};
}

Outcome method_cross_agreement() {
  std::mt19937_64 rng(0x5eed);
  int agree = 0;
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t x = rng() % 100'000'000 + 1;
    if (dk_summatory_recursive(4, x).value == d4_summatory(x).value) ++agree;
  }
  return {agree == 50, std::to_string(agree) + "/50 random x <= 1e8"};
}

Outcome leading_constant() {
  const auto grid = geometric_grid(10000, 10'000'000, 16);
  const auto oracle = summatory_oracle_at(FunctionKind::divisor_squared(), grid);
  std::vector<FitSample> samples;
  bool same = grid.size() == 16;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto fast = mean_square_summatory(grid[i]).value;
    same = same && fast == oracle[i].value;
    samples.push_back({grid[i], fast});
  }
  const auto report = fit_log_poly(samples);
  const double a3 = report.model.a3();
  const double inverse_pi2 = 1 / (constants::pi<double> * constants::pi<double>);
  const bool in_band = std::abs(a3 - inverse_pi2) <= a3_band;
  const bool reproduced = std::abs(a3 - fitted_a3_oracle) <= fitted_a3_drift;
  return {same && in_band && reproduced,
          "a3=" + fmt("%.17g", a3) + " |a3-1/pi^2|=" + fmt("%.3g", std::abs(a3 - inverse_pi2)) + " (band " +
              fmt("%g", a3_band) + "), drift from pinned " + fmt("%.3g", std::abs(a3 - fitted_a3_oracle))};
}

Outcome final_envelope() {
  const auto grid = geometric_grid(1000, 10'000'000, 41);
  const auto report = envelope(Claim::of(Claim::Tag::mean_square), grid);
  const auto& t = report.trend;
  const bool not_growing = t.size() >= 3 && t[t.size() - 2].max_ratio <= t[t.size() - 3].max_ratio &&
                           t[t.size() - 1].max_ratio <= t[t.size() - 2].max_ratio;
  std::string trend;
  for (const auto& d : t) trend += " 1e" + std::to_string(d.decade) + ":" + fmt("%.4f", d.max_ratio);
  return {std::isfinite(report.sup_ratio) && report.sup_ratio <= mean_square_envelope_bound && not_growing,
          "sup=" + fmt("%.4f", report.sup_ratio) + " (bound " + fmt("%g", mean_square_envelope_bound) +
              ") trend" + trend};
}

Outcome harmonic_envelope() {
  const std::uint64_t n = 10'000'000;
  const auto xs = one_to(n);
  bool ok = true;
  std::string detail;
  double gamma_error = 0;
  for (int k = 0; k <= 2; ++k) {
    const auto sums = harmonic_log_sums_at(xs, k);
    double sup = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      sup = std::max(sup, std::abs(sums[i] - harmonic_log_main(static_cast<double>(xs[i]), k)));
    }
    ok = ok && sup <= harmonic_bound[k];
    detail += "k=" + std::to_string(k) + " sup=" + fmt("%.4f", sup) + " ";
    if (k == 0) gamma_error = std::abs(sums[n - 1] - harmonic_log_main(1e7, 0) - constants::euler_gamma<double>);
  }
  ok = ok && gamma_error <= gamma_tolerance;
  return {ok, detail + "|ratio(1e7)-gamma|=" + fmt("%.3g", gamma_error)};
}

Outcome mobius_tail_bound() {
  const auto grid = geometric_grid(100, 10'000'000'000ULL, 161);
  const auto partials = mobius_tail_partials_at(grid);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(partials[i] - constants::inverse_zeta2<double>) *
                                std::sqrt(static_cast<double>(grid[i])));
  }
  const double at10 = mobius_tail(10).partial;
  const bool exact10 = std::abs(at10 - (1.0 - 1.0 / 4 - 1.0 / 9)) <= 1e-15;
  return {worst <= mobius_tail_constant && exact10,
          "max |partial-6/pi^2|*sqrt(x)=" + fmt("%.4f", worst) + " (C " + fmt("%g", mobius_tail_constant) +
              "), partial(10)=" + fmt("%.10f", at10)};
}

Outcome performance() {
  auto t0 = std::chrono::steady_clock::now();
  const auto d = divisor_summatory_hyperbola(10'000'000'000ULL);
  const double hyperbola_s = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto s = mean_square_summatory(1'000'000'000ULL);
  const double mean_square_s = seconds_since(t0);
  const bool ok = hyperbola_s < 1.0 && mean_square_s < 60.0 && to_string(d.value) == "231802823220";
  return {ok, "D(1e10) " + fmt("%.4f", hyperbola_s) + " s (< 1 s), S(1e9)=" + to_string(s.value) + " " +
                  fmt("%.3f", mean_square_s) + " s (< 60 s)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "convolution identity", 10, convolution_identity},
      {2, "hyperbola correctness", 30, hyperbola_correctness},
      {3, "mean-square fast path", 30, mean_square_fast_path},
      {4, "method cross-agreement", 60, method_cross_agreement},
      {5, "leading-constant recovery", 0, leading_constant},
      {6, "final-result envelope", 0, final_envelope},
      {7, "harmonic-log envelope", 0, harmonic_envelope},
      {8, "Moebius tail", 0, mobius_tail_bound},
      {9, "performance", 0, performance},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    if (c.budget_s > 0 && elapsed > c.budget_s) {
      o.pass = false;
      o.detail += " [over " + fmt("%g", c.budget_s) + " s budget]";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, elapsed, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
