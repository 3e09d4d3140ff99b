#include "sac/csv.hpp"

#include <cstring>
#include <fstream>

#include "sac/common.hpp"

namespace sac {

CsvWriter::CsvWriter(const std::string& path) {
  fp_ = std::fopen(path.c_str(), "wb");
  if (!fp_) raise(errc::bad_config, "cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() {
  if (fp_) std::fclose(fp_);
}

std::string CsvWriter::to_field(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvWriter::write_field(const std::string& field, bool& first) {
  if (!first) std::fputc(',', fp_);
  first = false;
  const bool needs_quotes = field.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) {
    std::fwrite(field.data(), 1, field.size(), fp_);
    return;
  }
  std::fputc('"', fp_);
  for (char c : field) {
    if (c == '"') std::fputc('"', fp_);
    std::fputc(c, fp_);
  }
  std::fputc('"', fp_);
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::bad_config, "cannot open " + path + " for reading");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool in_quotes = false;
  bool cell_started = false;
  char c;
  auto end_cell = [&]() {
    row.push_back(cell);
    cell.clear();
    cell_started = false;
  };
  auto end_row = [&]() {
    if (cell_started || !cell.empty() || !row.empty()) {
      end_cell();
      rows.push_back(row);
      row.clear();
    }
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          cell.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"': in_quotes = true; cell_started = true; break;
      case ',': end_cell(); cell_started = true; break;
      case '\r': break;
      case '\n': end_row(); break;
      default: cell.push_back(c); cell_started = true;
    }
  }
  end_row();
  return rows;
}

}  // namespace sac
