#include "shotnoise/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "shotnoise/errors.hpp"

namespace shotnoise {

void CsvTable::validate() const {
  if (columns.empty() || columns.size() != data.size()) throw DomainError("CsvTable: one data vector per column");
  for (const auto& c : data)
    if (c.size() != data.front().size()) throw DomainError("CsvTable: columns differ in length");
  for (const auto& name : columns)
    if (name.find_first_of(",\n\r\"") != std::string::npos) throw DomainError("CsvTable: bad column name " + name);
}

std::string format_real(double v) {
  // snprintf follows LC_NUMERIC; the CLI never changes it from "C".
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::render() const {
  validate();
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  const std::size_t rows = data.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_real(data[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  const std::string body = table.render();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace shotnoise
