#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperlab/experiments.hpp"

using nlohmann::json;

namespace {

struct MapFlags {
  int k = 1;
  double amplitude = 0.1;
  std::string orientation = "preserving";

  void attach(CLI::App* cmd) {
    cmd->add_option("--k", k, "attractor-repeller pairs");
    cmd->add_option("--amplitude", amplitude, "sine amplitude A, 0 < 2 pi k A < 1");
    cmd->add_option("--orientation", orientation, "preserving|reversing")
        ->check(CLI::IsMember({"preserving", "reversing"}));
  }
  json to_json() const {
    return {{"kind", "circle_ms"}, {"k", k}, {"amplitude", amplitude},
            {"orientation", orientation}};
  }
};

int finish(const hyperlab::RunOutcome& outcome) {
  if (!outcome.report.is_null() && outcome.report.contains("experiment")) {
    std::printf("%s: exit %d\n",
                outcome.report["experiment"].get<std::string>().c_str(),
                outcome.exit_code);
    for (const auto& f : outcome.written) std::printf("  wrote %s\n", f.c_str());
  } else {
    std::printf("experiment failed with exit %d\n", outcome.exit_code);
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperspace dynamics experiment runner"};
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list-experiments", list, "list experiment kinds and exit");

  std::string out_dir = "reports";
  app.add_option("--out-dir", out_dir, "report output directory");

  // run --config
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  std::string config_path;
  long long seed_override = -1;
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--seed", seed_override, "override the config seed");

  // shadow
  auto* shadow = app.add_subcommand("shadow", "pseudo-orbit shadowing experiments");
  MapFlags shadow_map;
  shadow_map.attach(shadow);
  std::string shadow_mode = "falsify-cf";
  double sh_eps = 0.1, sh_delta = 0.01, sh_grid = 1e-3, sh_eps2 = 0.05;
  int sh_window = 60, sh_strands = 3, sh_trials = 20;
  long long sh_seed = 2024;
  shadow->add_option("--mode", shadow_mode, "falsify-cf|shadow-2f|verify")
      ->check(CLI::IsMember({"falsify-cf", "shadow-2f", "verify"}));
  shadow->add_option("--epsilon", sh_eps, "shadowing radius");
  shadow->add_option("--delta", sh_delta, "pseudo-orbit gap");
  shadow->add_option("--window", sh_window, "index window");
  shadow->add_option("--grid", sh_grid, "candidate grid resolution");
  shadow->add_option("--strands", sh_strands, "strand count (shadow-2f)");
  shadow->add_option("--trials", sh_trials, "pseudo-orbit trials (shadow-2f)");
  shadow->add_option("--shadow-epsilon", sh_eps2, "target sup distance (shadow-2f)");
  shadow->add_option("--seed", sh_seed, "seed");

  // recurrence
  auto* rec = app.add_subcommand("recurrence", "orbit closures and fixed continua");
  MapFlags rec_map;
  rec_map.attach(rec);
  std::string rec_cons = "fixed-continua";
  double rec_x = 0.25, rec_a = 0.25, rec_b = 0.6, rec_eps = 0.05, rec_grid = 1e-3;
  int rec_stride = 1, rec_trunc = 50, rec_window = 100;
  rec->add_option("--construction", rec_cons,
                  "orbit-closure|homoclinic|fixed-continua|wandering")
      ->check(CLI::IsMember({"orbit-closure", "homoclinic", "fixed-continua", "wandering"}));
  rec->add_option("--x", rec_x, "base point");
  rec->add_option("--stride", rec_stride, "orbit stride k");
  rec->add_option("--truncation", rec_trunc, "orbit truncation");
  rec->add_option("--window", rec_window, "iteration window");
  rec->add_option("--a", rec_a, "arc start (wandering)");
  rec->add_option("--b", rec_b, "arc end (wandering)");
  rec->add_option("--epsilon", rec_eps, "certificate radius (wandering)");
  rec->add_option("--grid", rec_grid, "grid resolution (wandering)");

  // entropy
  auto* ent = app.add_subcommand("entropy", "separated-set entropy estimation");
  MapFlags ent_map;
  ent_map.attach(ent);
  std::string ent_system = "circle";
  double ent_alpha = 0.137;
  std::vector<double> ent_eps{0.1, 0.05};
  std::vector<int> ent_n{4, 6, 8, 10, 12};
  int ent_budget = 250;
  long long ent_seed = 505;
  ent->add_option("--system", ent_system, "circle|rotation|arcs")
      ->check(CLI::IsMember({"circle", "rotation", "arcs"}));
  ent->add_option("--alpha", ent_alpha, "rotation angle");
  ent->add_option("--eps-schedule", ent_eps, "decreasing epsilon schedule");
  ent->add_option("--n-schedule", ent_n, "increasing n schedule");
  ent->add_option("--budget", ent_budget, "sampler budget");
  ent->add_option("--seed", ent_seed, "seed");

  // coding
  auto* cod = app.add_subcommand("coding", "symbolic coding identity checks");
  MapFlags cod_map;
  cod_map.attach(cod);
  std::string cod_cons = "phi2f";
  int cod_r = 2, cod_window = 8, cod_samples = 1000;
  long long cod_seed = 707;
  cod->add_option("--construction", cod_cons, "sq|finite-map|cone|phi2f")
      ->check(CLI::IsMember({"sq", "finite-map", "cone", "phi2f"}));
  cod->add_option("--r", cod_r, "strand/alphabet parameter");
  cod->add_option("--window", cod_window, "index window");
  cod->add_option("--samples", cod_samples, "random samples");
  cod->add_option("--seed", cod_seed, "seed");

  // dendrite
  auto* den = app.add_subcommand("dendrite", "dendrite model experiments");
  std::string den_mode = "csigma";
  int den_k = 2, den_n = 2, den_r = 2, den_window = 3, den_samples = 1000;
  double den_delta = 0.0;
  long long den_seed = 606;
  den->add_option("--mode", den_mode, "csigma|fullcone|conjugacy")
      ->check(CLI::IsMember({"csigma", "fullcone", "conjugacy"}));
  den->add_option("--k", den_k, "graduation count");
  den->add_option("--n", den_n, "address length");
  den->add_option("--delta", den_delta, "separation threshold (0 = default)");
  den->add_option("--r", den_r, "leg families");
  den->add_option("--window", den_window, "code window");
  den->add_option("--samples", den_samples, "random samples");
  den->add_option("--seed", den_seed, "seed");

  // sphere
  auto* sph = app.add_subcommand("sphere", "north-south sphere experiments");
  std::string sph_mode = "nonshadowing";
  double sph_eps = 0.2, sph_delta = 0.02, sph_wedge = 0.35;
  int sph_window = 50, sph_scale = 10, sph_N = 2, sph_mesh = 12;
  sph->add_option("--mode", sph_mode, "periodic|homoclinic|conjugacy|nonshadowing")
      ->check(CLI::IsMember({"periodic", "homoclinic", "conjugacy", "nonshadowing"}));
  sph->add_option("--epsilon", sph_eps, "shadowing radius");
  sph->add_option("--delta", sph_delta, "pseudo-orbit gap");
  sph->add_option("--window", sph_window, "index window");
  sph->add_option("--wedge", sph_wedge, "wedge half-angle");
  sph->add_option("--scale", sph_scale, "candidate family scale");
  sph->add_option("--N", sph_N, "period (periodic mode)");
  sph->add_option("--mesh", sph_mesh, "mesh per block (conjugacy mode)");

  // reproduce-all
  auto* repro = app.add_subcommand("reproduce-all",
                                   "run every acceptance criterion with pinned seeds");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : hyperlab::list_experiments()) std::printf("%s\n", name.c_str());
    return 0;
  }

  if (run->parsed())
    return finish(hyperlab::run_config_file(config_path, out_dir, seed_override));

  if (shadow->parsed()) {
    json config = {{"experiment", "shadow." + shadow_mode},
                   {"system", shadow_map.to_json()},
                   {"seed", sh_seed},
                   {"params",
                    {{"epsilon", shadow_mode == "shadow-2f" ? sh_eps2 : sh_eps},
                     {"delta", sh_delta}, {"window", sh_window}, {"grid", sh_grid},
                     {"strands", sh_strands}, {"trials", sh_trials}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (rec->parsed()) {
    json config = {{"experiment", "recurrence." + rec_cons},
                   {"system", rec_map.to_json()},
                   {"params",
                    {{"x", rec_x}, {"stride", rec_stride}, {"truncation", rec_trunc},
                     {"window", rec_window}, {"a", rec_a}, {"b", rec_b},
                     {"epsilon", rec_eps}, {"grid", rec_grid}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (ent->parsed()) {
    json sys;
    if (ent_system == "rotation")
      sys = {{"kind", "rotation"}, {"alpha", ent_alpha}};
    else if (ent_system == "arcs")
      sys = {{"kind", "cf_arcs"}, {"map", ent_map.to_json()}};
    else
      sys = ent_map.to_json();
    json config = {{"experiment", "entropy.estimate"},
                   {"system", sys},
                   {"seed", ent_seed},
                   {"params",
                    {{"eps_schedule", ent_eps}, {"n_schedule", ent_n},
                     {"budget", ent_budget}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (cod->parsed()) {
    json config = {{"experiment", "coding." + cod_cons},
                   {"system", cod_map.to_json()},
                   {"seed", cod_seed},
                   {"params",
                    {{"r", cod_r}, {"window", cod_window}, {"samples", cod_samples}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (den->parsed()) {
    json config = {{"experiment", "dendrite." + den_mode},
                   {"seed", den_seed},
                   {"params",
                    {{"k", den_k}, {"n", den_n}, {"delta", den_delta}, {"r", den_r},
                     {"window", den_window}, {"samples", den_samples}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (sph->parsed()) {
    json config = {{"experiment", "sphere." + sph_mode},
                   {"params",
                    {{"epsilon", sph_eps}, {"delta", sph_delta}, {"window", sph_window},
                     {"wedge", sph_wedge}, {"scale", sph_scale}, {"N", sph_N},
                     {"mesh", sph_mesh}}}};
    return finish(hyperlab::run_experiment(config, out_dir));
  }
  if (repro->parsed()) {
    int code = hyperlab::reproduce_all(out_dir);
    std::printf("reproduce-all: %s (summary under %s)\n",
                code == 0 ? "all criteria pass" : "FAILURES", out_dir.c_str());
    return code;
  }

  std::printf("%s", app.help().c_str());
  return 0;
}
