#include "gls/report.hpp"

#include <cmath>
#include <cstdio>

#include "gls/common.hpp"

namespace gls {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

namespace {

void dump(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) {
          out += ",";
          out += nl;
        }
        out += pad;
        dump(j[i], indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : Json(format_double(x)).dump();
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_cell(const Json& c) {
  if (c.is_number_float()) return format_double(c.get<double>());
  if (c.is_string()) {
    const std::string s = c.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return c.dump();
}

}  // namespace

std::string json_dump(const Json& j, int indent) {
  std::string out;
  dump(j, indent, 0, out);
  out += "\n";
  return out;
}

std::string csv_dump(const CsvTable& t) {
  require(!t.header.empty(), "csv: header row is mandatory");
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_cell(Json(t.header[i]));
  out += "\n";
  for (const auto& row : t.rows) {
    require(row.size() == t.header.size(), "csv: row width differs from the header");
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

}  // namespace gls
