#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace nilgeo {

struct Check {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  std::string detail;
};

/// Named pass/fail checks. A report passes iff every check passes.
struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool pass, double residual = 0.0, std::string detail = {}) {
    checks.push_back({std::move(name), pass, residual, std::move(detail)});
  }

  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  std::vector<const Check*> failures() const {
    std::vector<const Check*> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(&c);
    return out;
  }
};

}  // namespace nilgeo
