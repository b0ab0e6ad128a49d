#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dmd::csv {

// Decimal float with 17 significant digits; round-trips every double exactly.
std::string number(double v);

std::vector<std::string> split(std::string_view line);

// Strict: the whole cell must parse as a finite or infinite double.
double parse_number(std::string_view cell);

}  // namespace dmd::csv
