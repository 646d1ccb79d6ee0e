#pragma once
// Mini-grammar `name(key=value,...)` used to address catalog entries and
// weights from the command line.

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gls {

struct Call {
  std::string name;
  std::vector<std::pair<std::string, double>> args;

  /// Value of `key`, or `fallback` when absent.
  [[nodiscard]] double get(std::string_view key, double fallback) const;
  [[nodiscard]] double require_arg(std::string_view key) const;
  [[nodiscard]] bool has(std::string_view key) const;
  /// Throws PreconditionError on keys outside `allowed`.
  void check_keys(std::initializer_list<std::string_view> allowed) const;
  /// Canonical text form with values printed at full precision.
  [[nodiscard]] std::string str() const;
};

Call parse_call(std::string_view text);
std::string format_number(double v);

}  // namespace gls
