#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dtdd {

// Minimal RFC 4180 writer: header row, CRLF line endings, quoting only where
// required. Numeric formatting is centralized here so identical values always
// serialize to identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void write(const std::filesystem::path& path) const;
  std::string to_string() const;

  static std::string num(double v);
  static std::string num(long long v);
  static std::string num(int v) { return num(static_cast<long long>(v)); }
  static std::string num(long v) { return num(static_cast<long long>(v)); }
  static std::string num(unsigned long long v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dtdd
