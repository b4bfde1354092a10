#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace eosim::cli {

// Runs one eo-sim invocation (args excludes the program name). Exit codes:
// 0 success, 1 domain or validation failure, 2 I/O or configuration failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "start:stop:step", "a,b,c" or a single value; any element may carry a unit.
// Bare numbers are taken in `default_unit` ("V", "nm", "um", "Hz", "ns").
// Throws ConfigError for empty, descending or malformed axes.
std::vector<double> parse_axis(std::string_view text, std::string_view default_unit);
double parse_quantity(std::string_view text, std::string_view default_unit);

}  // namespace eosim::cli
