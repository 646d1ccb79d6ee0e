#pragma once
// Deterministic JSON and CSV emitters: fixed key order, doubles at 17
// significant digits, non-finite values as the strings "inf", "-inf", "nan".

#include <string>
#include <vector>

#include <json.hpp>

namespace gls {

using Json = nlohmann::ordered_json;

/// Finite doubles stay numbers; non-finite ones become strings.
Json json_number(double x);
std::string json_dump(const Json& j, int indent = 2);

/// Header row plus one row per sample; cells are numbers or strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};
std::string csv_dump(const CsvTable& t);
std::string format_double(double x);

}  // namespace gls
