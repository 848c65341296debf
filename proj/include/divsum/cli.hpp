#ifndef DIVSUM_CLI_HPP
#define DIVSUM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace divsum::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_computation = 3;

/// Environment variable that overrides the memory cap (bytes).
inline constexpr const char* memory_cap_env = "DIVSUM_MEMORY_CAP";

enum class Command { sieve, sum, verify, envelope, fit, bench };
enum class Format { csv, json, text };

struct RunConfig {
  Command command = Command::sum;
  std::string function = "d2";
  std::string method = "fast";
  std::string identity = "convolution";
  std::string claim = "s";
  std::string suite = "hyperbola";
  std::uint64_t limit = 0;
  std::uint64_t x = 0;
  std::uint64_t x_min = 0;
  std::uint64_t x_max = 0;
  int points = 16;
  Format format = Format::json;
  std::optional<std::string> output;
  std::optional<std::uint64_t> memory_cap;
  std::optional<double> baseline_ms;
  bool deterministic = false;
};

/// Thrown for bad flags or values; maps to exit status 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses argv (without the program name) and validates the result.
RunConfig parse_args(const std::vector<std::string>& args);

/// Dispatches one command. Errors become a single JSON line on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit status contract applied to parse failures too.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Accepts plain decimal integers and `MeN` shorthand such as `1e10`.
std::uint64_t parse_count(const std::string& text);

}  // namespace divsum::cli

#endif  // DIVSUM_CLI_HPP
