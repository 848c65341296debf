#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "divsum/cli.hpp"
#include "divsum/report.hpp"

using namespace divsum;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::main_entry(args, out, err);
  return {status, out.str(), err.str()};
}

void require_single_line_error(const Outcome& o, const std::string& kind) {
  REQUIRE(!o.err.empty());
  CHECK(o.err.find('\n') == o.err.size() - 1);
  const auto j = nlohmann::json::parse(o.err);
  CHECK(j.at("error") == kind);
  CHECK(j.at("message").is_string());
}

}  // namespace

TEST_CASE("sum json record") {
  const auto o = invoke({"sum", "--fn", "d2", "--x", "10", "--method", "fast", "--format", "json", "--deterministic"});
  CHECK(o.status == 0);
  CHECK(o.out == "{\"x\":10,\"function\":\"d2\",\"method\":\"mobius_weighted\",\"value\":\"83\"}\n");

  const auto timed = invoke({"sum", "--fn", "d", "--x", "1e10"});
  CHECK(timed.status == 0);
  const auto j = nlohmann::json::parse(timed.out);
  CHECK(j.at("value") == "231802823220");
  CHECK(j.at("method") == "hyperbola");
  CHECK(j.at("elapsed_ms").is_number());
}

TEST_CASE("sum via sieve and csv") {
  const auto o = invoke({"sum", "--fn", "dk:4", "--x", "6", "--method", "sieve", "--format", "csv", "--deterministic"});
  CHECK(o.status == 0);
  CHECK(o.out == "x,function,method,value\n6,dk:4,sieve,39\n");
}

TEST_CASE("verify report") {
  const auto o = invoke({"verify", "--identity", "convolution", "--limit", "1000"});
  CHECK(o.status == 0);
  CHECK(o.out == "convolution: 1000/1000 ok\n");
  const auto j = nlohmann::json::parse(invoke({"verify", "--identity", "convolution", "--limit", "50", "--format", "json"}).out);
  CHECK(j.at("passed") == 50);
  CHECK(j.at("first_failure").is_null());
}

TEST_CASE("sieve export") {
  CHECK(invoke({"sieve", "--fn", "d", "--limit", "4"}).out == "n,value\n1,1\n2,2\n3,2\n4,3\n");
  const auto j = nlohmann::json::parse(invoke({"sieve", "--fn", "mu", "--limit", "6", "--format", "json"}).out);
  CHECK(j.at("values") == nlohmann::json::array({"1", "-1", "-1", "0", "-1", "1"}));
}

TEST_CASE("usage errors exit 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"sum", "--fn", "d2", "--x", "0"},
           {"sum", "--fn", "d2", "--x", "ten"},
           {"sum", "--fn", "mu", "--x", "10"},
           {"sum", "--fn", "d2", "--x", "10", "--method", "slow"},
           {"sum", "--fn", "d2", "--x", "10", "--bogus"},
           {"frobnicate"},
           {},
           {"sieve", "--fn", "phi", "--limit", "10"},
           {"envelope", "--claim", "s", "--xmin", "1", "--xmax", "100", "--points", "5"},
           {"envelope", "--claim", "s", "--xmin", "100", "--xmax", "100", "--points", "5"},
           {"envelope", "--claim", "q", "--xmin", "10", "--xmax", "100", "--points", "5"},
           {"fit", "--xmin", "10", "--xmax", "1000", "--points", "1"},
           {"fit", "--xmin", "100", "--xmax", "1000", "--points", "10"},
           {"sum", "--fn", "d2", "--x", "10", "--format", "text"},
       }) {
    CAPTURE(args.size() > 0 ? args[0] : std::string("<none>"));
    const auto o = invoke(args);
    CHECK(o.status == cli::exit_usage);
    require_single_line_error(o, "usage");
    CHECK(o.out.empty());
  }
}

TEST_CASE("computation errors exit 3") {
  const auto sizing = invoke({"sieve", "--fn", "d", "--limit", "1000000", "--memory-cap", "1000"});
  CHECK(sizing.status == cli::exit_computation);
  require_single_line_error(sizing, "sizing");

  const auto overflow = invoke({"sum", "--fn", "dk:1000", "--x", "1048576"});
  CHECK(overflow.status == cli::exit_computation);
  require_single_line_error(overflow, "overflow");

  ::setenv(cli::memory_cap_env, "100", 1);
  const auto env = invoke({"sieve", "--fn", "d", "--limit", "1000"});
  ::unsetenv(cli::memory_cap_env);
  CHECK(env.status == cli::exit_computation);
  require_single_line_error(env, "sizing");
}

TEST_CASE("identical invocations are byte-identical") {
  const std::vector<std::string> envelope_args = {"envelope", "--claim", "d4", "--xmin", "100", "--xmax", "1e6", "--points", "9"};
  const auto a = invoke(envelope_args);
  const auto b = invoke(envelope_args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> sum_args = {"sum", "--fn", "d2", "--x", "123456", "--deterministic"};
  CHECK(invoke(sum_args).out == invoke(sum_args).out);
}

TEST_CASE("envelope json schema") {
  const auto o = invoke({"envelope", "--claim", "s", "--xmin", "1000", "--xmax", "1e5", "--points", "5"});
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("claim") == "s");
  REQUIRE(j.at("samples").size() == 5);
  const auto& first = j.at("samples")[0];
  CHECK(first.at("x") == 1000);
  CHECK(first.at("exact").is_string());  // exact integers travel as decimal strings
  CHECK(first.at("ratio").is_number());
  double sup = 0;
  for (const auto& s : j.at("samples")) sup = std::max(sup, s.at("ratio").get<double>());
  CHECK(j.at("sup_ratio").get<double>() == sup);
  CHECK(j.at("trend").size() == 3);

  // Reals carry 17 significant digits.
  const std::regex main_field("\"main\":(-?[0-9.]+(e[-+]?[0-9]+)?)");
  std::smatch m;
  REQUIRE(std::regex_search(o.out, m, main_field));
  std::string digits = m[1].str().substr(0, m[1].str().find('e'));
  digits.erase(std::remove(digits.begin(), digits.end(), '.'), digits.end());
  digits.erase(0, digits.find_first_not_of('0'));
  CHECK(digits.size() == 17);

  const auto csv = invoke({"envelope", "--claim", "eq3:0", "--xmin", "10", "--xmax", "1000", "--points", "3", "--format", "csv"});
  CHECK(csv.out.rfind("claim,x,exact,main,normalizer,ratio\neq3:0,10,", 0) == 0);
}

TEST_CASE("fit json") {
  const auto o = invoke({"fit", "--xmin", "1000", "--xmax", "1e6", "--points", "10"});
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("count") == 10);
  CHECK(j.at("residuals").size() == 10);
  CHECK(std::abs(j.at("model").at("a3").get<double>() - 0.1013) < 0.01);
  CHECK(j.at("condition").get<double>() > 1);
  const auto sieve = invoke({"fit", "--xmin", "1000", "--xmax", "1e6", "--points", "10", "--method", "sieve"});
  CHECK(sieve.out == o.out);
}

TEST_CASE("bench") {
  const auto o = invoke({"bench", "--suite", "s", "--x", "1000000", "--deterministic"});
  CHECK(o.status == 0);
  CHECK(o.out == "{\"suite\":\"s\",\"x\":1000000,\"method\":\"mobius_weighted\",\"value\":\"421094344\"}\n");
  const auto slow = invoke({"bench", "--suite", "d4", "--x", "100000000", "--baseline-ms", "1e-9"});
  CHECK(slow.status == cli::exit_computation);
  require_single_line_error(slow, "computation");
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "divsum_cli_test.csv";
  const auto o = invoke({"sieve", "--fn", "d2", "--limit", "3", "--output", path.string()});
  CHECK(o.status == 0);
  CHECK(o.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str() == "n,value\n1,1\n2,4\n3,4\n");
  std::filesystem::remove(path);
}

TEST_CASE("help exits 0") {
  const auto o = invoke({"--help"});
  CHECK(o.status == 0);
  CHECK(o.out.find("sum") != std::string::npos);
}

TEST_CASE("parse_count") {
  CHECK(cli::parse_count("1e10") == 10'000'000'000ULL);
  CHECK(cli::parse_count("123") == 123);
  CHECK(cli::parse_count("18446744073709551615") == UINT64_MAX);
  CHECK_THROWS_AS(cli::parse_count("1e20"), DomainError);
  CHECK_THROWS_AS(cli::parse_count("-5"), DomainError);
  CHECK_THROWS_AS(cli::parse_count("1.5"), DomainError);
}

TEST_CASE("format_real") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1.0000000000000000");
  CHECK(format_real(1e20) == "1.0000000000000000e+20");
  CHECK(format_real(std::nan("")) == "null");
  CHECK(json_quote("a\"b\n") == "\"a\\\"b\\n\"");
}
