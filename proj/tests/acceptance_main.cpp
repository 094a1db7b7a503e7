// Acceptance suite runner: one pass/fail line per criterion; nonzero exit if
// anything fails. Also reachable as `lyap selftest`.
#include <cstdio>

#include "lyap/selftest.hpp"

int main() {
  auto results = lyap::run_selftest(true);
  if (!lyap::all_passed(results)) {
    std::printf("acceptance: FAILED\n");
    return 1;
  }
  std::printf("acceptance: all criteria passed\n");
  return 0;
}
