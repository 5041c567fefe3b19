#include "svmsoc/numtext.hpp"

#include <charconv>
#include <system_error>

namespace svmsoc {

namespace {

template <typename T>
std::string shortest(T v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <typename T>
bool parse_whole(std::string_view token, T& out) {
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (*begin == '+') ++begin;  // from_chars rejects a leading '+'
  T value{};
  const auto r = std::from_chars(begin, end, value);
  if (r.ec != std::errc{} || r.ptr != end) return false;
  out = value;
  return true;
}

}  // namespace

std::string float_text(float v) { return shortest(v); }
std::string double_text(double v) { return shortest(v); }

bool parse_float_text(std::string_view token, float& out) {
  return parse_whole(token, out);
}

bool parse_double_text(std::string_view token, double& out) {
  return parse_whole(token, out);
}

bool parse_u64_text(std::string_view token, unsigned long long& out) {
  if (!token.empty() && token.front() == '-') return false;
  return parse_whole(token, out);
}

bool parse_i64_text(std::string_view token, long long& out) {
  return parse_whole(token, out);
}

}  // namespace svmsoc
