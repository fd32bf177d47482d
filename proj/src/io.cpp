#include "ness/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ness {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
  if (columns.empty()) throw std::invalid_argument("write_csv: no columns");
  const std::size_t rows = columns.front().values.size();
  for (const auto& col : columns) {
    if (col.values.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c].name;
  }
  out += '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_real(columns[c].values[r]);
    }
    out += '\n';
  }
  write_text(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open " + path.string() + " for writing");
  stream << content;
  if (!stream) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ness
