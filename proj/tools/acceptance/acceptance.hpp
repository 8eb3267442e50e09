#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace degldp::acceptance {

struct Options {
  // Quick mode runs every criterion at its stated size. Full mode repeats the
  // cheap randomized properties at ten times the draw count.
  bool quick = true;
  std::uint64_t seed = 20240607;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::function<CriterionResult(const Options&)> run;
};

const std::vector<Criterion>& criteria();

// One line per criterion: "PASS 01 name: detail (1.23 s)".
std::string format(const CriterionResult& result);

// Runs the selected criteria (all when `only` is empty), streaming one line
// per criterion to `out` as each finishes. Returns true iff all passed.
bool run_all(const Options& opts, std::ostream& out,
             const std::vector<int>& only = {});

}  // namespace degldp::acceptance
