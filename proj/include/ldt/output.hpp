#pragma once

#include <string>
#include <vector>

namespace ldt {

// CSV table with '#' metadata lines; formatting is locale-free and
// deterministic so identical inputs give identical bytes.
struct Table {
  std::vector<std::string> meta;  // written as "# key=value" lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double v);  // %.12g, inf -> "inf"

void write_csv(const Table& t, const std::string& path);

// minimal self-contained line chart: first column is x, the rest are series
void write_svg_chart(const Table& t, const std::string& path,
                     const std::string& title);

}  // namespace ldt
