#pragma once

#include <string>
#include <string_view>

namespace svmsoc {

// Shortest decimal representation that re-parses to the same value bit for
// bit. Used by every text format this library writes.
std::string float_text(float v);
std::string double_text(double v);

// Whole-token numeric parsers: the token must contain exactly one number and
// nothing else. Return false on malformed input; non-finite results such as
// "inf" parse successfully and are left to the caller to reject.
bool parse_float_text(std::string_view token, float& out);
bool parse_double_text(std::string_view token, double& out);
bool parse_u64_text(std::string_view token, unsigned long long& out);
bool parse_i64_text(std::string_view token, long long& out);

}  // namespace svmsoc
