#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sglbo {

/// Shortest decimal representation that parses back to exactly the same double
/// (std::to_chars general format). Used for CSV output so files are
/// byte-stable across platforms.
std::string format_double(double x);

/// Shortest *scientific* representation that round-trips, with minimal
/// exponent digits and no '+' sign: 0.01775 -> "1.775e-2", 0.5 -> "5e-1".
/// Canonical number format of the noise-table files.
std::string format_rate(double x);

/// Parse a double from an entire token; returns false on trailing garbage.
bool parse_double(std::string_view token, double& out);

std::string_view trim(std::string_view s);

/// Split on runs of spaces/tabs; no empty tokens.
std::vector<std::string_view> split_ws(std::string_view s);

/// Split into lines on '\n' (a trailing '\r' per line is stripped).
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace sglbo
