#include "k3dyn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace k3dyn::csv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return quote(v);
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return k3dyn::to_string(v);
      },
      c);
}

void emit_table(const std::vector<Row>& rows, const std::vector<std::string>& header, std::ostream& out) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << quote(header[i]);
  out << "\r\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error(ErrorKind::invalid_argument, "emit_table: row has " + std::to_string(row.size()) +
                                                   " cells, header has " + std::to_string(header.size()));
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << "\r\n";
  }
}

void emit_table(const std::vector<Row>& rows, const std::vector<std::string>& header, const std::string& path) {
  std::ostringstream buf;
  emit_table(rows, header, buf);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  f << buf.str();
  if (!f) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

Table read_table(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      // part of CRLF
    } else if (ch == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += ch;
    }
  }
  if (in_quotes) throw Error(ErrorKind::invalid_argument, "read_table: unterminated quoted field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  Table t;
  if (records.empty()) return t;
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size())
      throw Error(ErrorKind::invalid_argument, "read_table: record " + std::to_string(i) + " has wrong width");
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

Table read_table_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return read_table(f);
}

double parse_double(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::invalid_argument, "not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorKind::invalid_argument, "not a number: '" + s + "'");
  return v;
}

// ---- orbits ------------------------------------------------------------------

namespace {

const char* kAxes[3] = {"x", "y", "z"};

}  // namespace

const std::vector<std::string>& orbit_header() {
  static const std::vector<std::string> h = [] {
    std::vector<std::string> cols = {"step", "mode", "direction"};
    for (const char* a : kAxes)
      for (const char* part : {"w0_re", "w0_im", "w1_re", "w1_im"}) cols.push_back(std::string(a) + "_" + part);
    for (const char* a : kAxes) cols.push_back(std::string("renorm_") + a);
    for (const char* a : kAxes) {
      cols.push_back(std::string(a) + "_w0_exact");
      cols.push_back(std::string(a) + "_w1_exact");
    }
    return cols;
  }();
  return h;
}

std::vector<Row> orbit_rows(const dynamics::OrbitRecord& rec) {
  std::vector<Row> rows;
  const bool exact = rec.mode == dynamics::Mode::exact;
  for (std::size_t k = 0; k < rec.points.size(); ++k) {
    Row row = {static_cast<long long>(k), dynamics::to_string(rec.mode), dynamics::to_string(rec.direction)};
    for (const auto& w : rec.points[k]) {
      row.push_back(w.w0.real());
      row.push_back(w.w0.imag());
      row.push_back(w.w1.real());
      row.push_back(w.w1.imag());
    }
    for (int a = 0; a < 3; ++a) {
      if (k == 0) row.push_back(std::string());
      else row.push_back(rec.renorm_logs[k - 1][a]);
    }
    for (int a = 0; a < 3; ++a) {
      if (exact) {
        row.push_back(rec.exact_points[k][a].w0);
        row.push_back(rec.exact_points[k][a].w1);
      } else {
        row.push_back(std::string());
        row.push_back(std::string());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

dynamics::OrbitRecord orbit_from_table(const Table& t) {
  if (t.header != orbit_header()) throw Error(ErrorKind::invalid_argument, "orbit table: unexpected header");
  dynamics::OrbitRecord rec;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    if (k == 0) {
      rec.mode = r[1] == "exact" ? dynamics::Mode::exact : dynamics::Mode::floating;
      rec.direction = r[2] == "backward" ? dynamics::Direction::backward : dynamics::Direction::forward;
    }
    surface::FloatPoint p;
    for (int a = 0; a < 3; ++a) {
      p[a].w0 = {parse_double(r[3 + 4 * a]), parse_double(r[4 + 4 * a])};
      p[a].w1 = {parse_double(r[5 + 4 * a]), parse_double(r[6 + 4 * a])};
    }
    rec.points.push_back(p);
    if (k > 0) rec.renorm_logs.push_back({parse_double(r[15]), parse_double(r[16]), parse_double(r[17])});
    if (rec.mode == dynamics::Mode::exact) {
      surface::ExactPoint e;
      for (int a = 0; a < 3; ++a) e[a] = {parse_rational(r[18 + 2 * a]), parse_rational(r[19 + 2 * a])};
      rec.exact_points.push_back(e);
    }
  }
  return rec;
}

}  // namespace k3dyn::csv
