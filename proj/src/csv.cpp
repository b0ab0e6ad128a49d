#include "dmd/csv.hpp"

#include <cstdlib>
#include <stdexcept>

#include <fmt/format.h>

namespace dmd::csv {

std::string number(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      break;
    }
    cells.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') cells.back().pop_back();
  return cells;
}

double parse_number(std::string_view cell) {
  const std::string s(cell);
  if (s.empty()) throw std::invalid_argument("empty numeric cell");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace dmd::csv
