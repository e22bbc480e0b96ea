#include "ldt/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ldt/common.hpp"

namespace ldt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const Table& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open for writing: " + path);
  for (const auto& m : t.meta) f << "# " << m << "\n";
  for (size_t c = 0; c < t.columns.size(); ++c)
    f << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c)
      f << format_double(row[c]) << (c + 1 < row.size() ? "," : "\n");
  }
  if (!f) throw ArgumentError("write failed: " + path);
}

void write_svg_chart(const Table& t, const std::string& path,
                     const std::string& title) {
  if (t.columns.size() < 2 || t.rows.empty())
    throw ArgumentError("svg chart needs an x column and at least one series");
  const int W = 720, Hgt = 480, ml = 60, mr = 20, mt = 40, mb = 40;
  double xlo = kInf, xhi = -kInf, ylo = kInf, yhi = -kInf;
  for (const auto& r : t.rows) {
    if (!std::isfinite(r[0])) continue;
    xlo = std::min(xlo, r[0]);
    xhi = std::max(xhi, r[0]);
    for (size_t c = 1; c < r.size(); ++c)
      if (std::isfinite(r[c])) {
        ylo = std::min(ylo, r[c]);
        yhi = std::max(yhi, r[c]);
      }
  }
  if (!(xlo < xhi)) xhi = xlo + 1.0;
  if (!(ylo < yhi)) yhi = ylo + 1.0;
  auto px = [&](double x) {
    return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return Hgt - mb - (y - ylo) / (yhi - ylo) * (Hgt - mt - mb);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot open for writing: " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
    << "\" height=\"" << Hgt << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << Hgt - mb << "\" x2=\"" << W - mr
    << "\" y2=\"" << Hgt - mb << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
    << "\" y2=\"" << Hgt - mb << "\" stroke=\"black\"/>\n";
  for (int k : {0, 1}) {
    double xv = k ? xhi : xlo, yv = k ? yhi : ylo;
    f << "<text x=\"" << px(xv) << "\" y=\"" << Hgt - mb + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(xv) << "</text>\n";
    f << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << format_double(yv) << "</text>\n";
  }
  for (size_t c = 1; c < t.columns.size(); ++c) {
    f << "<polyline fill=\"none\" stroke=\"" << colors[(c - 1) % 6]
      << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : t.rows)
      if (std::isfinite(r[0]) && std::isfinite(r[c]))
        f << format_double(px(r[0])) << "," << format_double(py(r[c])) << " ";
    f << "\"/>\n";
    f << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 * c
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"" << colors[(c - 1) % 6] << "\">" << t.columns[c]
      << "</text>\n";
  }
  f << "</svg>\n";
}

}  // namespace ldt
