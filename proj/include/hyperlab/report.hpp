#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlab {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest round-trip decimal form; locale-independent, byte-stable.
std::string num_str(double v);

std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::string_view data);

/// Write-then-rename so report files are never observed half-written.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// RFC-4180 CSV with a header row and '.' decimal separator.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return buf_; }

 private:
  void emit(const std::vector<std::string>& cells);
  std::string buf_;
  std::size_t width_;
};

}  // namespace hyperlab
