#ifndef DIVSUM_REPORT_HPP
#define DIVSUM_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "divsum/asymptotic.hpp"
#include "divsum/sieve.hpp"
#include "divsum/summatory.hpp"

namespace divsum {

/// Decimal literal with exactly 17 significant digits; `null` for non-finite values.
std::string format_real(double v);

std::string json_quote(std::string_view s);

/// {"x":..,"function":..,"method":..,"value":"..","elapsed_ms":..}. Timing is omitted when absent.
void write_json(std::ostream& out, const SummatoryValue& v, std::optional<double> elapsed_ms);
void write_csv_header(std::ostream& out, bool with_timing);
void write_csv_row(std::ostream& out, const SummatoryValue& v, std::optional<double> elapsed_ms);

void write_json(std::ostream& out, const ArithmeticTable& table);

void write_json(std::ostream& out, const IdentityCheck& check, std::string_view identity);
void write_csv(std::ostream& out, const IdentityCheck& check, std::string_view identity);

void write_json(std::ostream& out, const EnvelopeReport& report);
void write_csv(std::ostream& out, const EnvelopeReport& report);

void write_json(std::ostream& out, const FitReport& report);
void write_csv(std::ostream& out, const FitReport& report);

}  // namespace divsum

#endif  // DIVSUM_REPORT_HPP
