// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured values.  Run-to-run outputs land under
// build/acceptance_out (or ACCEPTANCE_OUT_DIR).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "hyperlab/experiments.hpp"

namespace {

std::string out_dir() {
  if (const char* env = std::getenv("ACCEPTANCE_OUT_DIR")) return env;
  return "acceptance_out";
}

void run_and_assert(int index) {
  auto res = hyperlab::run_criterion(index, out_dir());
  std::printf("[acceptance] criterion %d (%s): %s -- %s\n", res.index,
              res.name.c_str(), res.pass ? "PASS" : "FAIL", res.detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(res.pass, res.name, ": ", res.detail);
}

}  // namespace

TEST_CASE("criterion_1 hausdorff exactness") { run_and_assert(1); }
TEST_CASE("criterion_2 cf shadowing falsification") { run_and_assert(2); }
TEST_CASE("criterion_3 induced-2f shadowing") { run_and_assert(3); }
TEST_CASE("criterion_4 fixed continua structure") { run_and_assert(4); }
TEST_CASE("criterion_5 entropy dichotomy") { run_and_assert(5); }
TEST_CASE("criterion_6 inverse separated subtrees") { run_and_assert(6); }
TEST_CASE("criterion_7 coding identities") { run_and_assert(7); }
TEST_CASE("criterion_8 sphere constructions") { run_and_assert(8); }
TEST_CASE("criterion_9 determinism") { run_and_assert(9); }
