#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace birkhoff::harness {

using Cell = std::variant<double, long long, bool, std::string>;

/// Column-named rows, serialized as CSV (17 significant digits) or a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

}  // namespace birkhoff::harness
