#pragma once

#include <string>

namespace ocd {

/// 17-significant-digit decimal form, locale-independent; round-trips any
/// finite double exactly.
std::string format_double(double v);

/// Locale-independent parse of the full string; errors on trailing junk.
double parse_double(const std::string& text, bool* ok);
long parse_long(const std::string& text, bool* ok);
unsigned long long parse_u64(const std::string& text, bool* ok);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Creates the directory (and parents); errors with Status::io on failure.
void ensure_directory(const std::string& path);

}  // namespace ocd
