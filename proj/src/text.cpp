#include "sglbo/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sglbo/errors.hpp"

namespace sglbo {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_rate(double x) {
  if (!std::isfinite(x)) throw ArgumentError("format_rate: non-finite value");
  char buf[64];
  // Find the fewest mantissa digits that still round-trip.
  for (int prec = 0; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*e", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  std::string s(buf);
  auto epos = s.find('e');
  std::string mant = s.substr(0, epos);
  std::string exp = s.substr(epos + 1);
  // Strip mantissa trailing zeros and a dangling '.' ("5.00" -> "5").
  if (mant.find('.') != std::string::npos) {
    while (mant.back() == '0') mant.pop_back();
    if (mant.back() == '.') mant.pop_back();
  }
  // Minimal exponent digits, sign only when negative ("e-04" -> "e-4").
  bool neg = false;
  std::size_t i = 0;
  if (exp[i] == '+' || exp[i] == '-') {
    neg = exp[i] == '-';
    ++i;
  }
  while (i + 1 < exp.size() && exp[i] == '0') ++i;
  return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  // A trailing newline produces a final empty line; drop it for convenience.
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << content;
}

}  // namespace sglbo
