#pragma once

#include <string>
#include <vector>

namespace mildns::app {

// 17 significant digits; non-finite values print as inf, -inf or nan.
std::string format_number(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a header column, or header.size() when absent.
  std::size_t column(const std::string& name) const;
};

// Reads a numeric CSV with a header row. Ragged rows, non-numeric cells or a
// missing header throw ValidationError.
CsvTable read_csv(const std::string& path);

}  // namespace mildns::app
