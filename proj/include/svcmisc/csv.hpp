#pragma once

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace svcmisc::csv {

// Comma-separated table with a header row. Lines starting with '#' and blank
// lines are skipped. Cells are kept as text; use number() to parse.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  // Index of a named column, or npos when absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const { return column(name) != npos; }
  double number(std::size_t row, std::size_t col) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::string source;
};

Table read_table(std::istream& in, const std::string& source_name);
Table read_file(const std::string& path);

// Shortest "%.<digits>g" rendering of a value.
std::string format_number(double value, int significant_digits = 9);

// Opens a file for writing or throws IoError.
std::ofstream open_output(const std::string& path);

// Flushes and closes; throws IoError if any write failed.
void finish_output(std::ofstream& out, const std::string& path);

}  // namespace svcmisc::csv
