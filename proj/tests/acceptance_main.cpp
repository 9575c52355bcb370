// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
// Optional arguments restrict the run to groups (saddle, cumulant, als, embed).

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "tensordict/acceptance.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  tensordict::acceptance::Options options;
  for (int i = 1; i < argc; ++i) options.groups.insert(argv[i]);
  const fs::path scratch = fs::temp_directory_path() / "tensordict_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  options.scratch_dir = scratch.string();

  int failures = 0;
  for (const auto& r : tensordict::acceptance::run_all(options)) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name << "): " << r.detail
              << std::endl;
    failures += !r.passed;
  }
  fs::remove_all(scratch);
  std::cout << failures << " failing criteria" << std::endl;
  return failures == 0 ? 0 : 1;
}
