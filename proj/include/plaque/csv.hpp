#pragma once

// Comma-separated tables shared by every output of the toolkit.  Numbers are
// written with 17 significant digits so a table re-reads to the same doubles.

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace plaque::csv {

inline std::string format(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_header(std::ostream& os, std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto n : names) {
    if (!first) os << ',';
    os << n;
    first = false;
  }
  os << '\n';
}

inline void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format(v);
    first = false;
  }
  os << '\n';
}

}  // namespace plaque::csv
