// szego-lab: scenario runner for the perturbed cubic Szego flow on the
// circle. `run` executes a scenario and writes plot-ready CSV tables plus a
// JSON summary with pass/fail checks; `check` re-evaluates a stored run
// directory. The process exit code is the number of failed checks (capped).

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "szego/scenarios.hpp"

namespace {

void print_checks(const szego::ScenarioResult& result) {
  for (const auto& c : result.checks) {
    std::printf("%-6s %-28s value=%- .6e %s %.6e %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.value, c.relation.c_str(), c.threshold,
                c.note.empty() ? "" : ("| " + c.note).c_str());
  }
  std::printf("%d check(s) failed\n", result.failures());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the linearly perturbed cubic Szego equation"};
  app.require_subcommand(1);

  // run ----------------------------------------------------------------
  auto* run = app.add_subcommand("run", "run a scenario and write its report files");
  std::string scenario;
  run->add_option("scenario", scenario, "one of the scenarios from `szego-lab list`")
      ->required();
  szego::ScenarioOptions opt;
  std::string out_dir, config_file;
  std::vector<double> chi_re_im;
  auto* alpha_opt = run->add_option("--alpha", opt.alpha, "coupling of the linear term");
  auto* n_opt = run->add_option("--N", opt.truncation, "Fourier truncation");
  auto* grid_opt = run->add_option("--grid", opt.grid, "grid size M (power of two, >= 3N)");
  auto* tmax_opt = run->add_option("--tmax", opt.t_max, "time horizon");
  auto* rtol_opt = run->add_option("--rel-tol", opt.rel_tol, "integrator tolerance");
  auto* samp_opt = run->add_option("--sample-interval", opt.sample_interval, "sampling step");
  auto* tail_opt = run->add_option("--tail-guard", opt.tail_guard, "resolution guard");
  auto* seed_opt = run->add_option("--seed", opt.seed, "random seed");
  auto* data_opt = run->add_option("--data", opt.data_file, "rational datum JSON file");
  auto* p_opt = run->add_option("--p", opt.p, "pole parameter of the crossing datum");
  auto* c_opt = run->add_option("--c", opt.c, "coefficient of the growth datum");
  run->add_option("--chi-zero", chi_re_im,
                  "re im pairs: zeros of the lift Blaschke product")
      ->expected(-1);
  run->add_flag("--trace-zeros", opt.trace_zeros, "track Blaschke zeros along the run");
  run->add_option("--datum", opt.datum, "rank_drop_necessary datum: one_plus_z | crossing");
  run->add_option("--out", out_dir, "output directory (default runs/<scenario>)");
  run->add_option("--config", config_file, "JSON config file (flags take precedence)");

  // check --------------------------------------------------------------
  auto* check = app.add_subcommand("check", "re-evaluate pass/fail from a stored run");
  std::string run_dir;
  check->add_option("dir", run_dir, "run directory")->required();

  auto* list = app.add_subcommand("list", "list scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : szego::scenario_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (check->parsed()) {
      auto result = szego::check_run(run_dir);
      print_checks(result);
      return std::min(result.failures(), 125);
    }

    // precedence: flags > config file > defaults
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw szego::Error("cannot open config " + config_file);
      szego::Json j = szego::Json::parse(f);
      auto maybe = [&](CLI::Option* o, const char* key, auto& field) {
        using T = std::decay_t<decltype(field)>;
        if (o->count() == 0 && j.contains(key)) field = j[key].get<T>();
      };
      maybe(alpha_opt, "alpha", opt.alpha);
      maybe(n_opt, "N", opt.truncation);
      maybe(grid_opt, "grid", opt.grid);
      maybe(tmax_opt, "tmax", opt.t_max);
      maybe(rtol_opt, "rel_tol", opt.rel_tol);
      maybe(samp_opt, "sample_interval", opt.sample_interval);
      maybe(tail_opt, "tail_guard", opt.tail_guard);
      maybe(seed_opt, "seed", opt.seed);
      maybe(data_opt, "data", opt.data_file);
      maybe(p_opt, "p", opt.p);
      maybe(c_opt, "c", opt.c);
    }
    if (chi_re_im.size() % 2 != 0)
      throw szego::Error("--chi-zero expects re im pairs");
    for (size_t i = 0; i + 1 < chi_re_im.size(); i += 2)
      opt.chi_zeros.emplace_back(chi_re_im[i], chi_re_im[i + 1]);

    auto result = szego::run_scenario(scenario, opt);
    std::filesystem::path dir = out_dir.empty() ? ("runs/" + scenario) : out_dir;
    szego::write_run(result, dir);
    std::printf("run written to %s\n", dir.string().c_str());
    print_checks(result);
    return std::min(result.failures(), 125);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 120;
  }
}
