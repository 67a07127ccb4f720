#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace normcast::text {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
/// Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line);

/// Quotes a field only when it needs it.
std::string csv_field(std::string_view field);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace normcast::text
