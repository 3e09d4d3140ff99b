#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sac {

// Line-based `key = value` file with `[section]` headers. Keys must belong to
// the schema of their section; unknown keys or sections are errors.
class IniConfig {
public:
  static IniConfig parse_file(const std::string& path);
  static IniConfig parse_text(const std::string& text);

  // schema check; throws BadConfig naming the offender
  void validate(const std::map<std::string, std::vector<std::string>>& schema) const;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  // canonical echo: sorted sections and keys, one per line
  std::string echo() const;
  std::uint64_t hash() const;

private:
  std::map<std::string, std::map<std::string, std::string>> data_;
};

}  // namespace sac
