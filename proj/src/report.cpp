#include "divsum/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace divsum {

std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.17g", v);
  return buf;
}

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

void write_json(std::ostream& out, const SummatoryValue& v, std::optional<double> elapsed_ms) {
  out << "{\"x\":" << v.x << ",\"function\":" << json_quote(v.function.name())
      << ",\"method\":" << json_quote(method_name(v.method)) << ",\"value\":" << json_quote(to_string(v.value));
  if (elapsed_ms) out << ",\"elapsed_ms\":" << format_real(*elapsed_ms);
  out << "}\n";
}

void write_csv_header(std::ostream& out, bool with_timing) {
  out << "x,function,method,value" << (with_timing ? ",elapsed_ms" : "") << '\n';
}

void write_csv_row(std::ostream& out, const SummatoryValue& v, std::optional<double> elapsed_ms) {
  out << v.x << ',' << v.function.name() << ',' << method_name(v.method) << ',' << to_string(v.value);
  if (elapsed_ms) out << ',' << format_real(*elapsed_ms);
  out << '\n';
}

void write_json(std::ostream& out, const ArithmeticTable& table) {
  out << "{\"function\":" << json_quote(table.kind().name()) << ",\"limit\":" << table.limit() << ",\"values\":[";
  for (std::uint64_t n = 1; n <= table.limit(); ++n) {
    if (n > 1) out << ',';
    out << '"' << to_string(table[n]) << '"';
  }
  out << "]}\n";
}

void write_json(std::ostream& out, const IdentityCheck& check, std::string_view identity) {
  out << "{\"identity\":" << json_quote(identity) << ",\"limit\":" << check.limit << ",\"checked\":" << check.checked
      << ",\"passed\":" << check.passed << ",\"first_failure\":";
  if (check.first_failure) {
    out << *check.first_failure;
  } else {
    out << "null";
  }
  out << ",\"ok\":" << (check.ok() ? "true" : "false") << "}\n";
}

void write_csv(std::ostream& out, const IdentityCheck& check, std::string_view identity) {
  out << "identity,limit,checked,passed,first_failure\n"
      << identity << ',' << check.limit << ',' << check.checked << ',' << check.passed << ',';
  if (check.first_failure) out << *check.first_failure;
  out << '\n';
}

namespace {

std::string exact_text(const EnvelopeSample& s) {
  return s.exact_integer ? json_quote(to_string(*s.exact_integer)) : format_real(s.exact);
}

}  // namespace

void write_json(std::ostream& out, const EnvelopeReport& report) {
  out << "{\"claim\":" << json_quote(report.claim.name()) << ",\"samples\":[";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    if (i > 0) out << ',';
    out << "{\"x\":" << s.x << ",\"exact\":" << exact_text(s) << ",\"main\":" << format_real(s.main)
        << ",\"normalizer\":" << format_real(s.normalizer) << ",\"ratio\":" << format_real(s.ratio) << '}';
  }
  out << "],\"sup_ratio\":" << format_real(report.sup_ratio) << ",\"trend\":[";
  for (std::size_t i = 0; i < report.trend.size(); ++i) {
    if (i > 0) out << ',';
    out << "{\"decade\":" << report.trend[i].decade << ",\"max_ratio\":" << format_real(report.trend[i].max_ratio)
        << '}';
  }
  out << "],\"rejected\":[";
  for (std::size_t i = 0; i < report.rejected.size(); ++i) {
    if (i > 0) out << ',';
    out << json_quote(report.rejected[i]);
  }
  out << "]}\n";
}

void write_csv(std::ostream& out, const EnvelopeReport& report) {
  out << "claim,x,exact,main,normalizer,ratio\n";
  for (const auto& s : report.samples) {
    out << report.claim.name() << ',' << s.x << ','
        << (s.exact_integer ? to_string(*s.exact_integer) : format_real(s.exact)) << ',' << format_real(s.main) << ','
        << format_real(s.normalizer) << ',' << format_real(s.ratio) << '\n';
  }
}

void write_json(std::ostream& out, const FitReport& report) {
  const auto& m = report.model;
  out << "{\"model\":{\"a3\":" << format_real(m.a3()) << ",\"a2\":" << format_real(m.a2())
      << ",\"a1\":" << format_real(m.a1()) << ",\"a0\":" << format_real(m.a0()) << "},\"x_min\":" << report.x_min
      << ",\"x_max\":" << report.x_max << ",\"count\":" << report.count << ",\"residuals\":[";
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    if (i > 0) out << ',';
    out << "{\"x\":" << report.xs[i] << ",\"residual\":" << format_real(report.residuals[i]) << '}';
  }
  out << "],\"max_abs_residual\":" << format_real(report.max_abs_residual)
      << ",\"condition\":" << format_real(report.condition) << "}\n";
}

void write_csv(std::ostream& out, const FitReport& report) {
  const auto& m = report.model;
  out << "x,residual,a3,a2,a1,a0,condition\n";
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    out << report.xs[i] << ',' << format_real(report.residuals[i]) << ',' << format_real(m.a3()) << ','
        << format_real(m.a2()) << ',' << format_real(m.a1()) << ',' << format_real(m.a0()) << ','
        << format_real(report.condition) << '\n';
  }
}

}  // namespace divsum
