#include "divsum/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "divsum/asymptotic.hpp"
#include "divsum/report.hpp"
#include "divsum/sieve.hpp"
#include "divsum/summatory.hpp"

namespace divsum::cli {

namespace {

struct HelpRequested {
  std::string text;
};

// Strings as typed; converted and validated after CLI11 has matched the grammar.
struct RawArgs {
  std::string limit, x, x_min, x_max, memory_cap;
  int points = 16;
  std::string format;
  std::string output;
  std::optional<double> baseline_ms;
  bool deterministic = false;
  std::string function, method = "fast", identity, claim, suite;
};

void add_common(CLI::App* sub, RawArgs& raw, const std::string& default_format) {
  sub->add_option("--format", raw.format, "csv or json (default " + default_format + ")")->check(CLI::IsMember({"csv", "json", "text"}));
  sub->add_option("--output", raw.output, "write the report here instead of standard output");
  sub->add_option("--memory-cap", raw.memory_cap, "table memory cap in bytes");
  sub->add_flag("--deterministic", raw.deterministic, "omit timing fields");
}

Format to_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  return Format::json;
}

std::uint64_t positive(const std::string& flag, const std::string& text) {
  std::uint64_t v = 0;
  try {
    v = parse_count(text);
  } catch (const DomainError& e) {
    throw UsageError(flag + ": " + e.what());
  }
  if (v == 0) throw UsageError(flag + " must be at least 1");
  return v;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void emit_error(std::ostream& err, std::string_view kind, std::string_view message) {
  err << "{\"error\":" << json_quote(kind) << ",\"message\":" << json_quote(message) << "}\n";
}

SieveOptions sieve_options(const RunConfig& config) {
  SieveOptions options;
  if (config.memory_cap) {
    options.memory_cap_bytes = *config.memory_cap;
  } else if (const char* env = std::getenv(memory_cap_env); env != nullptr && *env != '\0') {
    options.memory_cap_bytes = positive(memory_cap_env, env);
  }
  return options;
}

struct BenchCase {
  const char* suite;
  std::uint64_t x;
  double budget_ms;
};

constexpr BenchCase bench_cases[] = {
    {"hyperbola", 10'000'000'000ULL, 1'000.0},
    {"d4", 1'000'000'000ULL, 60'000.0},
    {"s", 1'000'000'000ULL, 60'000.0},
};

int run_command(const RunConfig& config, std::ostream& out) {
  const SieveOptions options = sieve_options(config);
  const std::optional<double> no_timing;

  switch (config.command) {
    case Command::sieve: {
      const auto table = sieve(FunctionKind::parse(config.function), config.limit, options);
      if (config.format == Format::json) {
        write_json(out, table);
      } else {
        write_csv(out, table);
      }
      return exit_ok;
    }
    case Command::sum: {
      const auto kind = FunctionKind::parse(config.function);
      const auto start = std::chrono::steady_clock::now();
      const SummatoryValue v =
          config.method == "sieve" ? summatory_oracle(kind, config.x, options) : summatory_fast(kind, config.x, options);
      const auto timing = config.deterministic ? no_timing : std::optional<double>(elapsed_since(start));
      if (config.format == Format::csv) {
        write_csv_header(out, timing.has_value());
        write_csv_row(out, v, timing);
      } else {
        write_json(out, v, timing);
      }
      return exit_ok;
    }
    case Command::verify: {
      const auto check = verify_convolution(config.limit, options);
      if (config.format == Format::json) {
        write_json(out, check, config.identity);
      } else if (config.format == Format::csv) {
        write_csv(out, check, config.identity);
      } else {
        out << config.identity << ": " << check.passed << '/' << check.checked << (check.ok() ? " ok" : " FAILED");
        if (check.first_failure) out << " (first failure at n=" << *check.first_failure << ')';
        out << '\n';
      }
      return check.ok() ? exit_ok : exit_computation;
    }
    case Command::envelope: {
      const auto grid = geometric_grid(config.x_min, config.x_max, config.points);
      const auto report = envelope(Claim::parse(config.claim), grid, options);
      if (config.format == Format::csv) {
        write_csv(out, report);
      } else {
        write_json(out, report);
      }
      return exit_ok;
    }
    case Command::fit: {
      const auto grid = geometric_grid(config.x_min, config.x_max, config.points);
      std::vector<FitSample> samples;
      if (config.method == "sieve") {
        for (const auto& v : summatory_oracle_at(FunctionKind::divisor_squared(), grid, options)) {
          samples.push_back({v.x, v.value});
        }
      } else {
        for (auto x : grid) samples.push_back({x, mean_square_summatory(x, options).value});
      }
      const auto report = fit_log_poly(samples);
      if (config.format == Format::csv) {
        write_csv(out, report);
      } else {
        write_json(out, report);
      }
      return exit_ok;
    }
    case Command::bench: {
      const BenchCase* bench = nullptr;
      for (const auto& c : bench_cases) {
        if (config.suite == c.suite) bench = &c;
      }
      const std::uint64_t x = config.x != 0 ? config.x : bench->x;
      const auto start = std::chrono::steady_clock::now();
      SummatoryValue v;
      if (config.suite == "hyperbola") {
        v = divisor_summatory_hyperbola(x);
      } else if (config.suite == "d4") {
        v = d4_summatory(x, options);
      } else {
        v = mean_square_summatory(x, options);
      }
      const double elapsed = elapsed_since(start);
      // Budgets apply at the reference size; a baseline tolerates a 2x regression.
      bool ok = x != bench->x || elapsed <= bench->budget_ms;
      if (config.baseline_ms) ok = ok && elapsed <= 2.0 * *config.baseline_ms;
      out << "{\"suite\":" << json_quote(config.suite) << ",\"x\":" << x << ",\"method\":"
          << json_quote(method_name(v.method)) << ",\"value\":" << json_quote(to_string(v.value));
      if (!config.deterministic) {
        out << ",\"elapsed_ms\":" << format_real(elapsed) << ",\"budget_ms\":" << format_real(bench->budget_ms);
        if (config.baseline_ms) out << ",\"baseline_ms\":" << format_real(*config.baseline_ms);
        out << ",\"ok\":" << (ok ? "true" : "false");
      }
      out << "}\n";
      if (!ok) throw std::runtime_error("bench " + config.suite + " exceeded its time budget");
      return exit_ok;
    }
  }
  return exit_ok;
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
  const auto e = text.find_first_of("eE");
  const std::string mantissa = text.substr(0, e);
  Int128 value = parse_int128(mantissa);
  if (e != std::string::npos) {
    const Int128 exponent = parse_int128(text.substr(e + 1));
    if (exponent < 0 || exponent > 19) throw DomainError("exponent out of range in " + text);
    for (Int128 i = 0; i < exponent; ++i) {
      value *= 10;
      if (value > Int128(UINT64_MAX)) break;
    }
  }
  if (value < 0) throw DomainError("negative value: " + text);
  if (value > Int128(UINT64_MAX)) throw DomainError("value exceeds 64 bits: " + text);
  return static_cast<std::uint64_t>(value);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Exact and asymptotic divisor-function sums", "divsum"};
  app.require_subcommand(1, 1);
  RawArgs raw;

  auto* sieve_cmd = app.add_subcommand("sieve", "tabulate mu, d, d_k or d^2 on [1, N]");
  sieve_cmd->add_option("--limit", raw.limit, "N")->required();
  sieve_cmd->add_option("--fn", raw.function, "mu | d | dk:K | d2")->required();
  add_common(sieve_cmd, raw, "csv");

  auto* sum_cmd = app.add_subcommand("sum", "exact summatory value at x");
  sum_cmd->add_option("--x", raw.x, "argument")->required();
  sum_cmd->add_option("--fn", raw.function, "d | dk:K | d2")->required();
  sum_cmd->add_option("--method", raw.method, "sieve | fast")->check(CLI::IsMember({"sieve", "fast"}));
  add_common(sum_cmd, raw, "json");

  auto* verify_cmd = app.add_subcommand("verify", "check d(n)^2 = sum mu(delta) d4(n / delta^2) for n <= N");
  verify_cmd->add_option("--identity", raw.identity, "convolution")
      ->required()
      ->check(CLI::IsMember({"convolution"}));
  verify_cmd->add_option("--limit", raw.limit, "N")->required();
  add_common(verify_cmd, raw, "text");

  auto* envelope_cmd = app.add_subcommand("envelope", "sample |exact - main| / normalizer on a geometric grid");
  envelope_cmd->add_option("--claim", raw.claim, "eq3:K | eq4 | eq4r | d3 | d4 | s | mobius")->required();
  envelope_cmd->add_option("--xmin", raw.x_min)->required();
  envelope_cmd->add_option("--xmax", raw.x_max)->required();
  envelope_cmd->add_option("--points", raw.points)->required();
  add_common(envelope_cmd, raw, "json");

  auto* fit_cmd = app.add_subcommand("fit", "least-squares x (a3 ln^3 x + ... + a0) to exact S(x)");
  fit_cmd->add_option("--xmin", raw.x_min)->required();
  fit_cmd->add_option("--xmax", raw.x_max)->required();
  fit_cmd->add_option("--points", raw.points)->required();
  fit_cmd->add_option("--method", raw.method, "source of exact values: sieve | fast")
      ->check(CLI::IsMember({"sieve", "fast"}));
  add_common(fit_cmd, raw, "json");

  auto* bench_cmd = app.add_subcommand("bench", "time a sublinear algorithm at its reference size");
  bench_cmd->add_option("--suite", raw.suite, "hyperbola | d4 | s")
      ->required()
      ->check(CLI::IsMember({"hyperbola", "d4", "s"}));
  bench_cmd->add_option("--x", raw.x, "override the reference size");
  bench_cmd->add_option("--baseline-ms", raw.baseline_ms, "fail when slower than twice this");
  add_common(bench_cmd, raw, "json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    const auto subs = app.get_subcommands();
    throw HelpRequested{subs.empty() ? app.help() : subs.front()->help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (raw.format.empty()) raw.format = name == "sieve" ? "csv" : name == "verify" ? "text" : "json";
  config.format = to_format(raw.format);
  config.deterministic = raw.deterministic;
  config.baseline_ms = raw.baseline_ms;
  if (!raw.output.empty()) config.output = raw.output;
  if (!raw.memory_cap.empty()) config.memory_cap = positive("--memory-cap", raw.memory_cap);
  config.method = raw.method;
  config.points = raw.points;

  auto check_function = [&](bool allow_mu) {
    try {
      const auto kind = FunctionKind::parse(raw.function);
      if (!allow_mu && kind == FunctionKind::mobius()) throw UsageError("--fn mu has no summatory method");
    } catch (const DomainError& e) {
      throw UsageError(std::string("--fn: ") + e.what());
    }
    config.function = raw.function;
  };
  auto check_grid = [&]() {
    config.x_min = positive("--xmin", raw.x_min);
    config.x_max = positive("--xmax", raw.x_max);
    if (config.x_min < 2) throw UsageError("--xmin must be at least 2");
    if (config.x_max <= config.x_min) throw UsageError("--xmax must exceed --xmin");
    if (config.points < 2) throw UsageError("--points must be at least 2");
  };

  if (name == "sieve") {
    config.command = Command::sieve;
    config.limit = positive("--limit", raw.limit);
    check_function(true);
  } else if (name == "sum") {
    config.command = Command::sum;
    config.x = positive("--x", raw.x);
    check_function(false);
  } else if (name == "verify") {
    config.command = Command::verify;
    config.identity = raw.identity;
    config.limit = positive("--limit", raw.limit);
  } else if (name == "envelope") {
    config.command = Command::envelope;
    check_grid();
    try {
      config.claim = Claim::parse(raw.claim).name();
    } catch (const DomainError& e) {
      throw UsageError(std::string("--claim: ") + e.what());
    }
  } else if (name == "fit") {
    config.command = Command::fit;
    check_grid();
  } else {
    config.command = Command::bench;
    config.suite = raw.suite;
    if (!raw.x.empty()) config.x = positive("--x", raw.x);
    if (config.baseline_ms && !(*config.baseline_ms > 0)) throw UsageError("--baseline-ms must be positive");
  }
  if (config.format == Format::text && config.command != Command::verify) {
    throw UsageError("--format text is only available for verify");
  }
  return config;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) {
        emit_error(err, "io", "cannot open " + *config.output);
        return exit_computation;
      }
      const int status = run_command(config, file);
      if (!file.flush()) {
        emit_error(err, "io", "failed writing " + *config.output);
        return exit_computation;
      }
      return status;
    }
    return run_command(config, out);
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return exit_usage;
  } catch (const DomainError& e) {
    emit_error(err, "usage", e.what());
    return exit_usage;
  } catch (const SizingError& e) {
    emit_error(err, "sizing", e.what());
  } catch (const OverflowError& e) {
    emit_error(err, "overflow", e.what());
  } catch (const ConditioningError& e) {
    emit_error(err, "conditioning", e.what());
  } catch (const std::exception& e) {
    emit_error(err, "computation", e.what());
  }
  return exit_computation;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.text;
    return exit_ok;
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return exit_usage;
  }
  return run(config, out, err);
}

}  // namespace divsum::cli
