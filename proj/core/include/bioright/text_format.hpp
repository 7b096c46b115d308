#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bioright {

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);
/// Fixed-point with `decimals` digits; "nan" for NaN.
std::string format_fixed(double value, int decimals);

/// Strict full-string parses; nullopt-style failure is reported via bool.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view text);

}  // namespace bioright
