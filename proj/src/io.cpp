#include "subdiff/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subdiff/real.hpp"

namespace subdiff {

uint64_t fnv1a64(const void* data, size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  uint64_t hash = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

uint64_t fnv1a64(const std::string& text) {
  return fnv1a64(text.data(), text.size());
}

std::string hash_hex(uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw NumericError("write failed for: " + path);
}

std::string file_hash_hex(const std::string& path) {
  return hash_hex(fnv1a64(read_text_file(path)));
}

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

CsvBuilder::CsvBuilder(std::vector<std::string> header)
    : columns_(header.size()) {
  if (header.empty()) throw ConfigError("csv header must not be empty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvBuilder::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ConfigError("csv row has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(columns_));
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvBuilder::write(const std::string& path) const {
  write_text_file(path, text_);
}

}  // namespace subdiff
