#pragma once

// RFC 4180 tables. Floats are written with 17 significant digits so they
// read back bit for bit; rationals are written as "p/q".

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "k3dyn/dynamics.hpp"
#include "k3dyn/rational.hpp"

namespace k3dyn::csv {

using Cell = std::variant<std::string, double, long long, Rational>;
using Row = std::vector<Cell>;

std::string format_cell(const Cell& c);
std::string format_double(double x);
std::string quote(const std::string& field);

/// Throws ErrorKind::invalid_argument when a row's width differs from the header.
void emit_table(const std::vector<Row>& rows, const std::vector<std::string>& header, std::ostream& out);
/// Throws ErrorKind::io when the file cannot be written.
void emit_table(const std::vector<Row>& rows, const std::vector<std::string>& header, const std::string& path);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

double parse_double(const std::string& s);

// ---- orbit records ----------------------------------------------------------

const std::vector<std::string>& orbit_header();
std::vector<Row> orbit_rows(const dynamics::OrbitRecord& rec);
dynamics::OrbitRecord orbit_from_table(const Table& t);

}  // namespace k3dyn::csv
