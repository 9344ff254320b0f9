#ifndef EMT_REPORT_HPP
#define EMT_REPORT_HPP

#include <string>
#include <vector>

namespace emt {

// Outcome of one verified identity: either it passed, it failed with a
// witness, or it was skipped because a carrier would exceed the guard.
struct Check {
  std::string name;
  bool ok = true;
  bool skipped = false;
  std::string detail;  // witness on failure, reason on skip
};

struct Report {
  std::vector<Check> checks;

  void pass(std::string name) { checks.push_back({std::move(name), true, false, ""}); }
  void fail(std::string name, std::string witness) {
    checks.push_back({std::move(name), false, false, std::move(witness)});
  }
  void skip(std::string name, std::string why) {
    checks.push_back({std::move(name), true, true, std::move(why)});
  }
  void check(std::string name, bool ok, std::string witness = "") {
    if (ok)
      pass(std::move(name));
    else
      fail(std::move(name), std::move(witness));
  }
  void merge(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  }

  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
  size_t n_ran() const {
    size_t n = 0;
    for (const auto& c : checks)
      if (!c.skipped) ++n;
    return n;
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.ok) return &c;
    return nullptr;
  }
};

}  // namespace emt

#endif
