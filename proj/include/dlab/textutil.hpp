#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dlab::text {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string trim(std::string_view s);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_ws(std::string_view s);

// Replaces every non-alphanumeric character with a space (ASCII rules).
std::string punct_to_space(std::string_view s);

// Splits on whitespace, dropping empty pieces.
std::vector<std::string> split_ws(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

bool is_digits(std::string_view s);

// Strips leading/trailing characters that are not alphanumeric.
// "board," -> "board", "[signal]" -> "signal".
std::string_view strip_edge_punct(std::string_view token);

bool iequals(std::string_view a, std::string_view b);

}  // namespace dlab::text
