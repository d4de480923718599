#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace itermean::selftest {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the ten acceptance criteria in order.
std::vector<Criterion> run_all();

/// One "PASS|FAIL <id> <title>: <detail>" line per criterion; returns true iff all pass.
bool report(const std::vector<Criterion>& results, std::ostream& out);

}  // namespace itermean::selftest
