#include "ocd/textio.hpp"

#include "ocd/error.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ocd {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, bool* ok) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  *ok = res.ec == std::errc{} && res.ptr == end && !text.empty();
  return v;
}

long parse_long(const std::string& text, bool* ok) {
  long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  *ok = res.ec == std::errc{} && res.ptr == end && !text.empty();
  return v;
}

unsigned long long parse_u64(const std::string& text, bool* ok) {
  unsigned long long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  *ok = res.ec == std::errc{} && res.ptr == end && !text.empty();
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Status::io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(Status::io, "error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Status::io, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(Status::io, "error while writing '" + path + "'");
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) fail(Status::io, "cannot create directory '" + path + "': " + ec.message());
  if (!std::filesystem::is_directory(path, ec) || ec) {
    fail(Status::io, "'" + path + "' is not a directory");
  }
}

}  // namespace ocd
