#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vefrac::detail {

std::string_view strip_comment(std::string_view line);
std::string_view trim(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Correctly rounded decimal parsing; the whole token must be consumed.
double parse_double(std::string_view tok);
std::size_t parse_index(std::string_view tok);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace vefrac::detail
