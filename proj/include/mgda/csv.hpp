#ifndef MGDA_CSV_HPP_
#define MGDA_CSV_HPP_

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgda::csv {

/// 17 significant digits, enough to round-trip a double.
std::string FormatDouble(double v);

std::string JoinRow(const std::vector<std::string>& cells);

/// Raised for malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line of each row

  /// Column index by name, or -1.
  int Column(const std::string& name) const;
};

/// Comma-separated with a header row. Every row must match the header width.
Table Read(std::istream& in);

double ParseDouble(const std::string& cell, int line);

}  // namespace mgda::csv

#endif  // MGDA_CSV_HPP_
