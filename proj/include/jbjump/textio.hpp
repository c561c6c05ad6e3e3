#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace jbjump {

/// Shortest-safe round-trip formatting: 17 significant digits.
std::string format_double(double v);

/// Parses the whole string as a double; throws InvalidArgument otherwise.
double parse_double(std::string_view s);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_quote(const std::string& s);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace jbjump
