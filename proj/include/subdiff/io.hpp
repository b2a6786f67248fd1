#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subdiff {

// 64-bit FNV-1a content hash, used to fingerprint output files in run
// manifests and to assert byte-identical reruns.
uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64(const std::string& text);
std::string hash_hex(uint64_t hash);

// Shortest decimal form that round-trips through double. Deterministic, so
// identical numeric results serialize to identical bytes.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string file_hash_hex(const std::string& path);
void ensure_directory(const std::string& path);

// Minimal deterministic CSV assembly: one header row, then data rows.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }
  void write(const std::string& path) const;

 private:
  size_t columns_ = 0;
  std::string text_;
};

}  // namespace subdiff
