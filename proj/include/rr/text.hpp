#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rr::text {

// Decodes bytes as UTF-8 (invalid sequences become U+FFFD) and returns the
// NFC-normalized UTF-8 encoding.
std::string normalize(std::string_view bytes);

std::string_view trim(std::string_view s);
std::string trim_copy(std::string_view s);

// ASCII-only lowercase; used for config keys and heading normalization.
std::string ascii_lower(std::string_view s);

// Lowercased maximal runs of Unicode letters and digits.
std::vector<std::string> word_tokens(std::string_view utf8);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace rr::text
