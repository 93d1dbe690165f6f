#include <cstdio>

#include "multiest/selfcheck.hpp"

int main() {
  bool all_pass = true;
  for (int i = 1; i <= 10; ++i) {
    const auto r = multiest::run_criterion(i);
    all_pass = all_pass && r.pass;
    std::printf("criterion %d [%s] %s (%.1fs): %s\n", r.index, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
