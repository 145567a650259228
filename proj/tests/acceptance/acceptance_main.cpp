// Prints one [PASS]/[FAIL] line per acceptance criterion; exits non-zero if
// any criterion fails.

#include <cstdio>
#include <filesystem>

#include "acceptance/criteria.hpp"

int main() {
  brandpulse::acceptance::CriteriaOptions opts;
  opts.scratch = std::filesystem::temp_directory_path() / "brandpulse_acceptance";
  std::filesystem::create_directories(opts.scratch);
  int failed = 0;
  brandpulse::acceptance::run_criteria(opts, [&](const auto& r) {
    std::printf("%s\n", brandpulse::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  });
  std::printf("%d of 11 criteria passed\n", 11 - failed);
  std::filesystem::remove_all(opts.scratch);
  return failed == 0 ? 0 : 1;
}
