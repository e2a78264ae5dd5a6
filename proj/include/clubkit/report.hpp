#pragma once

/* Check records and their two renderings.
 *
 * Text is for eyes: it carries timings and prints failures inline.  The
 * structured form is for diffing runs against each other, so it sorts the
 * same way every time and deliberately leaves wall-clock noise out; two runs
 * over the same inputs and seed must serialize byte for byte.
 */

#include <json.hpp>

#include <string>
#include <vector>

namespace clubkit {

struct CheckRecord {
  std::string suite;
  std::string name;    // e.g. "clubalt/eta-square/iso"
  std::string anchor;  // the operation under test, as "<header>/<function>"
  bool pass = true;
  std::string detail;  // counterexample or hypothesis tag when failing
  double elapsed_ms = 0.0;
};

struct Report {
  std::vector<CheckRecord> checks;

  int n_pass() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass ? 1 : 0;
    return n;
  }
  int n_fail() const { return static_cast<int>(checks.size()) - n_pass(); }
  bool all_pass() const { return n_fail() == 0; }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json rec = {
          {"suite", c.suite}, {"name", c.name}, {"anchor", c.anchor}, {"pass", c.pass}};
      if (!c.pass) rec["counterexample"] = c.detail;
      arr.push_back(std::move(rec));
    }
    return {{"checks", std::move(arr)},
            {"summary",
             {{"total", static_cast<int>(checks.size())},
              {"passed", n_pass()},
              {"failed", n_fail()}}}};
  }

  std::string to_text() const {
    std::string out;
    for (const auto& c : checks) {
      out += c.pass ? "ok   " : "FAIL ";
      out += c.suite + "/" + c.name + "  [" + c.anchor + "]";
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.1fms", c.elapsed_ms);
      out += buf;
      out += "\n";
      if (!c.pass) out += "     " + (c.detail.empty() ? std::string("(no detail)") : c.detail) + "\n";
    }
    out += std::to_string(checks.size()) + " checks, " + std::to_string(n_pass()) + " passed, " +
           std::to_string(n_fail()) + " failed\n";
    return out;
  }
};

}  // namespace clubkit
