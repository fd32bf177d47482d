#ifndef NESS_IO_HPP
#define NESS_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace ness {

/// One named CSV column of reals.
struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// Format a real with 17 significant digits (round-trip exact).
std::string format_real(double x);

/// Write a comma-separated file with a header row; all columns must have
/// equal length. Reals are written with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

/// Write a string to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace ness

#endif
