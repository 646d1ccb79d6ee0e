// Acceptance run: one PASS/FAIL line per criterion 1..11.
// Usage: acceptance <path-to-gls> [--allow-red N ...]
// Exit 0 when every criterion passes or every failing one is listed with
// --allow-red; the FAIL lines are printed either way.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "gls/audit.hpp"

namespace {

// Wall-clock limits in seconds; criteria without an entry are untimed.
const std::map<int, double> kTimeLimit{{1, 10.0}, {6, 5.0}, {10, 10.0}};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-gls> [--allow-red N ...]\n";
    return 64;
  }
  const std::string cli = argv[1];
  std::set<int> allow_red;
  for (int i = 2; i < argc; ++i) {
    if (std::string(argv[i]) == "--allow-red" && i + 1 < argc) allow_red.insert(std::atoi(argv[++i]));
  }

  std::set<int> failed;
  for (int id = 1; id <= gls::kAuditCount; ++id) {
    const auto t0 = std::chrono::steady_clock::now();
    gls::CriterionResult r;
    std::string error;
    try {
      r = gls::audit_criterion(id);
    } catch (const std::exception& e) {
      r.id = id;
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = r.passed && error.empty();
    std::string note = r.title;
    if (const auto lim = kTimeLimit.find(id); lim != kTimeLimit.end()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " [%.2f s, limit %.0f s]", secs, lim->second);
      note += buf;
      ok = ok && secs < lim->second;
    }
    if (!error.empty()) note += " [error: " + error + "]";
    if (!ok) failed.insert(id);
    std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << note << std::endl;
  }

  // Determinism: two audit-all runs through the CLI give identical bytes.
  const std::string a = "acceptance_run_a.json", b = "acceptance_run_b.json";
  const int ra = std::system((cli + " audit-all --out " + a + " > /dev/null 2>&1").c_str());
  const int rb = std::system((cli + " audit-all --out " + b + " > /dev/null 2>&1").c_str());
  const std::string ja = slurp(a), jb = slurp(b);
  const bool same = !ja.empty() && ja == jb;
  std::remove(a.c_str());
  std::remove(b.c_str());
  if (!same) failed.insert(11);
  std::cout << "criterion 11: " << (same ? "PASS" : "FAIL") << "  audit-all output is byte-identical across runs ("
            << ja.size() << " bytes, exit codes " << WEXITSTATUS(ra) << "/" << WEXITSTATUS(rb) << ")" << std::endl;

  bool only_allowed = true;
  for (int id : failed) only_allowed = only_allowed && allow_red.count(id) > 0;
  std::cout << (failed.empty() ? "all criteria pass" : std::to_string(failed.size()) + " criteria fail") << std::endl;
  return only_allowed ? 0 : 1;
}
