#pragma once

// End-to-end acceptance checks shared by the test binary and `benchmark`.

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tensordict::acceptance {

/// Plot-ready series, one row per point.
struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  /// saddle | cumulant | als | embed
  std::string group;
  bool passed = false;
  std::string detail;
  double seconds = 0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Curve> curves;
};

struct Options {
  /// Restrict to these groups; empty runs everything.
  std::set<std::string> groups;
  /// Scratch space for criteria that write files (criterion 8).
  std::string scratch_dir;
};

int criterion_count();
const char* criterion_group(int id);

CriterionResult run_criterion(int id, const Options& options = {});
std::vector<CriterionResult> run_all(const Options& options = {});

}  // namespace tensordict::acceptance
