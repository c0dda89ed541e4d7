#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace pkv::text {

// Lowercases ASCII plus the Latin-1 Supplement, Latin Extended-A, Greek and
// Cyrillic capital ranges. Other code points and invalid bytes pass through.
std::string to_lower(std::string_view s);

// True if any code point that to_lower would change is present.
bool has_uppercase(std::string_view s);

// Number of code points (invalid bytes count as one each).
std::size_t utf8_length(std::string_view s);

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_all_digits(std::string_view s);

}  // namespace pkv::text
