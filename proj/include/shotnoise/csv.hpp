#pragma once

// Plain CSV output: header row, '.' decimal point, LF line endings, reals
// with 17 significant digits so values round-trip exactly.

#include <filesystem>
#include <string>
#include <vector>

namespace shotnoise {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column

  void validate() const;
  std::string render() const;
};

std::string format_real(double v);

/// Writes the rendered table; throws std::runtime_error on I/O failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace shotnoise
