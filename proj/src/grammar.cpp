#include "gls/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "gls/common.hpp"

namespace gls {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_value(std::string_view s) {
  s = trim(s);
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return kInf;
  if (lower == "-inf") return -kInf;
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw PreconditionError("grammar: bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

double Call::get(std::string_view key, double fallback) const {
  for (const auto& [k, v] : args)
    if (k == key) return v;
  return fallback;
}

double Call::require_arg(std::string_view key) const {
  for (const auto& [k, v] : args)
    if (k == key) return v;
  throw PreconditionError(name + ": missing parameter '" + std::string(key) + "'");
}

bool Call::has(std::string_view key) const {
  return std::any_of(args.begin(), args.end(), [&](const auto& kv) { return kv.first == key; });
}

void Call::check_keys(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : args)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw PreconditionError(name + ": unknown parameter '" + k + "'");
}

std::string format_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char b2[40];
    std::snprintf(b2, sizeof b2, "%.*g", prec, v);
    if (std::strtod(b2, nullptr) == v) return b2;
  }
  return buf;
}

std::string Call::str() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].first + "=" + format_number(args[i].second);
  }
  return out + ")";
}

Call parse_call(std::string_view text) {
  text = trim(text);
  Call c;
  const auto open = text.find('(');
  if (open == std::string_view::npos) {
    c.name = std::string(text);
  } else {
    if (text.back() != ')') throw PreconditionError("grammar: missing ')' in '" + std::string(text) + "'");
    c.name = std::string(trim(text.substr(0, open)));
    std::string_view body = text.substr(open + 1, text.size() - open - 2);
    while (!trim(body).empty()) {
      const auto comma = body.find(',');
      const std::string_view item = body.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw PreconditionError("grammar: expected key=value in '" + std::string(item) + "'");
      const std::string key(trim(item.substr(0, eq)));
      if (key.empty()) throw PreconditionError("grammar: empty key");
      if (c.has(key)) throw PreconditionError("grammar: duplicate key '" + key + "'");
      c.args.emplace_back(key, parse_value(item.substr(eq + 1)));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }
  if (c.name.empty()) throw PreconditionError("grammar: empty name");
  for (char ch : c.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
      throw PreconditionError("grammar: bad name '" + c.name + "'");
  return c;
}

}  // namespace gls
