#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace sac {

// RFC-4180 CSV: header row, LF line endings, quoting only when needed,
// doubles printed with 17 significant digits for bitwise-stable reruns.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  template <class... Ts>
  void row(const Ts&... fields) {
    bool first = true;
    (write_field(to_field(fields), first), ...);
    std::fputc('\n', fp_);
  }

private:
  static std::string to_field(double v);
  static std::string to_field(int v) { return std::to_string(v); }
  static std::string to_field(long v) { return std::to_string(v); }
  static std::string to_field(unsigned long v) { return std::to_string(v); }
  static std::string to_field(unsigned long long v) { return std::to_string(v); }
  static std::string to_field(const char* s) { return s; }
  static std::string to_field(const std::string& s) { return s; }
  void write_field(const std::string& field, bool& first);

  std::FILE* fp_ = nullptr;
};

// Minimal quoted-field-aware reader; returns rows of cells.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace sac
