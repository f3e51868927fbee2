#pragma once

#include <map>
#include <string>
#include <vector>

namespace swsyk {

/// Shortest decimal with 17 significant digits ("%.17g"); round-trips doubles.
std::string format_double(double x);

/// Parses a double, accepting "nan"/"inf". Throws IoError on garbage.
double parse_double(const std::string& text);

/// Ordered key/value metadata written as "# key: value" lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string metadata_block(const Metadata& meta);

/// Splits "# key: value" lines off the top of a text file.
Metadata parse_metadata_line(const std::string& line, Metadata into);

std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

/// Writes text to path atomically enough for resumable runs (temp + rename).
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace swsyk
