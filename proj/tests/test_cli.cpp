#include "hyperlab/experiments.hpp"

#include <filesystem>

#include "doctest.h"
#include "hyperlab/report.hpp"

using namespace hyperlab;
using nlohmann::json;

namespace {

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("hyperlab_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("map_from_json validates the record") {
  json good = {{"kind", "circle_ms"}, {"k", 1}, {"amplitude", 0.1}};
  CHECK(map_from_json(good).pairs() == 1);
  CHECK_THROWS(map_from_json(json{{"kind", "torus"}}));
  CHECK_THROWS(map_from_json(json{{"kind", "circle_ms"}, {"k", 1}, {"amplitude", 0.9}}));
}

TEST_CASE("malformed config file exits with the invalid-config code") {
  std::string dir = temp_dir("badcfg");
  write_file_atomic(dir + "/bad.json", "{not json");
  auto outcome = run_config_file(dir + "/bad.json", dir);
  CHECK(outcome.exit_code == kExitInvalidConfig);

  write_file_atomic(dir + "/unknown.json", R"({"experiment":"nope"})");
  CHECK(run_config_file(dir + "/unknown.json", dir).exit_code == kExitInvalidConfig);
}

TEST_CASE("entropy run with zero budget is inconclusive with a partial table") {
  std::string dir = temp_dir("budget0");
  json config = {{"experiment", "entropy.estimate"},
                 {"params", {{"budget", 0}}},
                 {"seed", 1}};
  auto outcome = run_experiment(config, dir);
  CHECK(outcome.exit_code == kExitInconclusive);
  CHECK(outcome.report.value("partial", false));
}

TEST_CASE("falsification experiment reports and exits cleanly") {
  std::string dir = temp_dir("falsify");
  json config = {{"experiment", "shadow.falsify-cf"},
                 {"params", {{"epsilon", 0.1}, {"delta", 0.01}, {"window", 40},
                             {"grid", 1.0 / 25}}},
                 {"seed", 5}};
  auto outcome = run_experiment(config, dir);
  CHECK(outcome.exit_code == kExitOk);
  CHECK(outcome.report.value("verdict", "") == "falsified");
  CHECK(outcome.report.contains("config_hash"));
  CHECK(outcome.report.contains("effective_config"));
  REQUIRE(outcome.written.size() == 2);
  CHECK(std::filesystem::exists(outcome.written[0]));
  CHECK(std::filesystem::exists(outcome.written[1]));
}

TEST_CASE("identical config and seed give byte-identical outputs") {
  json config = {{"experiment", "entropy.estimate"},
                 {"system", {{"kind", "circle_ms"}, {"k", 1}, {"amplitude", 0.1}}},
                 {"params", {{"budget", 100}, {"n_schedule", {3, 5, 7}}}},
                 {"seed", 11}};
  std::string d1 = temp_dir("det1"), d2 = temp_dir("det2");
  auto o1 = run_experiment(config, d1);
  auto o2 = run_experiment(config, d2);
  REQUIRE(o1.exit_code == kExitOk);
  REQUIRE(o2.exit_code == kExitOk);
  REQUIRE(o1.written.size() == o2.written.size());
  for (std::size_t i = 0; i < o1.written.size(); ++i)
    CHECK(read_file(o1.written[i]) == read_file(o2.written[i]));
}

TEST_CASE("worker count never changes report bytes") {
  json config = {{"experiment", "shadow.falsify-cf"},
                 {"params", {{"window", 30}, {"grid", 1.0 / 30}}},
                 {"seed", 13}};
  std::string d1 = temp_dir("thr1"), d2 = temp_dir("thr2");
  setenv("HYPERLAB_THREADS", "1", 1);
  auto o1 = run_experiment(config, d1);
  setenv("HYPERLAB_THREADS", "4", 1);
  auto o2 = run_experiment(config, d2);
  unsetenv("HYPERLAB_THREADS");
  REQUIRE(o1.exit_code == kExitOk);
  REQUIRE(o1.written.size() == o2.written.size());
  for (std::size_t i = 0; i < o1.written.size(); ++i)
    CHECK(read_file(o1.written[i]) == read_file(o2.written[i]));
}

TEST_CASE("every advertised experiment kind dispatches") {
  std::string dir = temp_dir("dispatch");
  // cheap parameters per kind so the sweep stays fast
  json cheap = {
      {"shadow.falsify-cf", {{"window", 20}, {"grid", 1.0 / 15}}},
      {"shadow.shadow-2f", {{"trials", 1}, {"window", 10}, {"grid", 1e-3}}},
      {"shadow.verify", {{"window", 10}}},
      {"recurrence.orbit-closure", {{"truncation", 20}}},
      {"recurrence.homoclinic", {{"window", 30}}},
      {"recurrence.fixed-continua", json::object()},
      {"recurrence.wandering", {{"grid", 1.0 / 50}, {"window", 40}}},
      {"entropy.estimate", {{"budget", 60}, {"n_schedule", {2, 4}}}},
      {"entropy.exact-family", {{"r", 1}, {"n", 2}}},
      {"coding.sq", {{"samples", 50}}},
      {"coding.phi2f", {{"samples", 20}, {"window", 6}}},
      {"coding.finite-map", {{"r", 2}, {"window", 15}}},
      {"coding.cone", {{"samples", 50}}},
      {"dendrite.csigma", {{"k", 2}, {"n", 2}}},
      {"dendrite.fullcone", {{"samples", 50}}},
      {"dendrite.conjugacy", {{"samples", 50}}},
      {"sphere.periodic", {{"window", 10}}},
      {"sphere.homoclinic", {{"window", 15}}},
      {"sphere.conjugacy", {{"window", 10}, {"mesh", 6}}},
      {"sphere.nonshadowing", {{"scale", 1}}}};
  for (const auto& kind : list_experiments()) {
    json config = {{"experiment", kind}, {"seed", 9}};
    REQUIRE(cheap.contains(kind));
    config["params"] = cheap[kind];
    auto outcome = run_experiment(config, dir);
    INFO(kind);
    CHECK(outcome.exit_code == kExitOk);
  }
}
