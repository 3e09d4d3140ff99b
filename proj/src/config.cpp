#include "sac/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sac/common.hpp"
#include "sac/rng.hpp"

namespace sac {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniConfig IniConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::bad_config, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

IniConfig IniConfig::parse_text(const std::string& text) {
  IniConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') raise(errc::bad_config, "unterminated section header: " + t);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) raise(errc::bad_config, "empty section name");
      cfg.data_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      raise(errc::bad_config, "line " + std::to_string(lineno) + " is not key = value: " + t);
    if (section.empty()) raise(errc::bad_config, "key outside any [section]: " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) raise(errc::bad_config, "empty key on line " + std::to_string(lineno));
    if (cfg.data_[section].count(key))
      raise(errc::bad_config, "duplicate key " + section + "." + key);
    cfg.data_[section][key] = value;
  }
  return cfg;
}

void IniConfig::validate(const std::map<std::string, std::vector<std::string>>& schema) const {
  for (const auto& [section, kv] : data_) {
    const auto it = schema.find(section);
    if (it == schema.end()) raise(errc::bad_config, "unknown section [" + section + "]");
    for (const auto& [key, value] : kv) {
      (void)value;
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        raise(errc::bad_config, "unknown key " + section + "." + key);
    }
  }
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  return s != data_.end() && s->second.count(key) > 0;
}

std::string IniConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return fallback;
  const auto k = s->second.find(key);
  return (k == s->second.end()) ? fallback : k->second;
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  if (!has(section, key)) return fallback;
  return std::stod(get(section, key, ""));
}

long IniConfig::get_long(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  return std::stol(get(section, key, ""));
}

std::uint64_t IniConfig::get_u64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  return std::stoull(get(section, key, ""));
}

bool IniConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key, "");
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  raise(errc::bad_config, "boolean expected for " + section + "." + key + ", got " + v);
}

std::vector<double> IniConfig::get_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  std::vector<double> out;
  std::istringstream in(get(section, key, ""));
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(std::stod(t));
  }
  if (out.empty()) raise(errc::bad_config, "empty list for " + section + "." + key);
  return out;
}

std::string IniConfig::echo() const {
  std::string out;
  for (const auto& [section, kv] : data_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  }
  return out;
}

std::uint64_t IniConfig::hash() const {
  const std::string e = echo();
  return fnv1a(e.data(), e.size());
}

}  // namespace sac
