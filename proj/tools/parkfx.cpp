// parkfx: command-line driver for the park-effects pipeline.

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "parkfx/common.hpp"
#include "parkfx/pipeline.hpp"

namespace {

using namespace parkfx;

struct Command {
  const char* name;
  const char* help;
  void (*run)(const PipelineConfig&);
};

constexpr Command kCommands[] = {
    {"ingest", "parse event and roster files into the plate-appearance table", cmd_ingest},
    {"build", "aggregate plate appearances into game x matchup observations", cmd_build},
    {"fit", "fit the mixed model (see --subset)", cmd_fit},
    {"adjust", "adjusted means, ranks and clusters from the full model", cmd_adjust},
    {"diagnose", "Poissonness bins and the subset-model comparison", cmd_diagnose},
    {"anova", "division analysis of the adjustment magnitudes", cmd_anova},
    {"simulate", "draw a synthetic corpus from the published estimates", cmd_simulate},
    {"recover", "compare a fitted model with the simulation truth", cmd_recover},
    {"hrpf", "classical home-run park factors from the game table", cmd_hrpf},
};

int run(int argc, char** argv) {
  PipelineConfig c;
  CLI::App app{"Matchup-specific ballpark home-run effects", "parkfx"};
  app.fallthrough();
  app.set_config("--config", "", "read options from a key=value config file");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the effective configuration and exit")
      ->configurable(false);

  app.add_option("--event-dir", c.event_dir, "directory of event files")->group("Paths");
  app.add_option("--roster-dir", c.roster_dir, "directory of roster files")->group("Paths");
  app.add_option("--out-dir", c.out_dir, "output directory")->capture_default_str()->group("Paths");
  app.add_option("--pa-table", c.pa_table, "plate-appearance CSV (default <out-dir>/pa.csv)")->group("Paths");
  app.add_option("--games", c.games_table, "game CSV (default <out-dir>/games.csv)")->group("Paths");
  app.add_option("--observations", c.observations, "observation CSV (default <out-dir>/observations.csv)")
      ->group("Paths");
  app.add_option("--model", c.model, "model JSON (default <out-dir>/model_<subset>.json)")->group("Paths");
  app.add_option("--truth", c.truth, "simulation truth JSON (default <out-dir>/truth.json)")->group("Paths");
  app.add_option("--divisions", c.divisions, "park,division CSV (default: built-in map)")->group("Paths");

  std::vector<int> seasons(c.study.seasons.begin(), c.study.seasons.end());
  app.add_option("--seasons", seasons, "study seasons")->capture_default_str()->group("Study");
  bool skip_unknown = false;
  app.add_flag("--skip-unknown,!--strict", skip_unknown, "skip PAs with unknown player ids instead of failing")
      ->capture_default_str()->group("Study");
  std::string fallback = "league";
  app.add_option("--fallback-rate", fallback, "rate for players without elsewhere PAs")
      ->check(CLI::IsMember({"league", "zero"}))->capture_default_str()->group("Study");
  app.add_option("--min-elsewhere-pa", c.study.min_elsewhere_pa, "PAs needed before the fallback is skipped")
      ->capture_default_str()->group("Study");

  std::string season_mode = "random";
  app.add_option("--subset", c.subset, "model subset")
      ->check(CLI::IsMember(ModelSpec::subset_names()))->capture_default_str()->group("Model");
  app.add_option("--season-mode", season_mode, "season effects")
      ->check(CLI::IsMember({"random", "fixed", "none"}))->capture_default_str()->group("Model");
  app.add_option("--tol", c.fit.tol, "relative objective tolerance")->capture_default_str()->group("Model");
  app.add_option("--score-tol", c.fit.score_tol, "max |score| at convergence")->capture_default_str()->group("Model");
  app.add_option("--max-iter", c.fit.max_iter, "IRLS iteration limit")->capture_default_str()->group("Model");
  app.add_option("--ridge", c.fit.ridge, "ridge on cells without home runs")->capture_default_str()->group("Model");
  app.add_option("--max-season-sd", c.fit.max_sigma, "upper bound of the season-SD search")
      ->capture_default_str()->group("Model");

  app.add_option("--bin-width", c.bin_width, "Poissonness bin width")->capture_default_str()->group("Report");
  app.add_option("--min-bin-n", c.min_bin_n, "smallest bin drawn in the Poissonness plot")
      ->capture_default_str()->group("Report");
  app.add_option("--cluster-threshold", c.cluster_threshold, "ECDF gap that starts a new cluster")
      ->capture_default_str()->group("Report");

  app.add_option("--seed", c.seed, "simulation seed")->capture_default_str()->group("Simulation");
  app.add_option("--sim-games", c.sim_games, "games per park and season")->capture_default_str()->group("Simulation");
  app.add_option("--sim-sigma2", c.sim_sigma2, "season-effect variance")->capture_default_str()->group("Simulation");
  app.add_option("--sim-cv", c.sim_cv, "CV of the personnel sums")->capture_default_str()->group("Simulation");
  app.add_option("--sim-first-season", c.sim_first_season)->capture_default_str()->group("Simulation");
  app.add_option("--sim-last-season", c.sim_last_season)->capture_default_str()->group("Simulation");
  app.add_option("--sim-skip-seasons", c.sim_skip_seasons)->capture_default_str()->group("Simulation");

  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& cmd : kCommands) subs.emplace_back(app.add_subcommand(cmd.name, cmd.help), &cmd);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (print_config) {
    std::cout << app.config_to_str(true, true);
    return 0;
  }
  const Command* chosen = nullptr;
  for (auto [sub, cmd] : subs)
    if (sub->parsed()) chosen = cmd;
  if (!chosen) {
    std::cerr << app.help() << "\nerror: a subcommand is required\n";
    return 2;
  }

  c.study.seasons = std::set<int>(seasons.begin(), seasons.end());
  c.study.unknown_player = skip_unknown ? UnknownPlayerPolicy::skip : UnknownPlayerPolicy::strict;
  c.study.fallback_rate_policy =
      fallback == "zero" ? FallbackRatePolicy::zero : FallbackRatePolicy::league_matchup_mean;
  c.season_mode = parse_season_mode(season_mode);

  try {
    chosen->run(c);
  } catch (const ConvergenceError& e) {
    fmt::print(stderr, "parkfx {}: convergence failure: {}\n", chosen->name, e.what());
    const auto& t = e.trajectory();
    fmt::print(stderr, "objective trajectory ({} values):", t.size());
    for (std::size_t i = t.size() > 10 ? t.size() - 10 : 0; i < t.size(); ++i) fmt::print(stderr, " {:.10g}", t[i]);
    fmt::print(stderr, "\n");
    return 4;
  } catch (const UsageError& e) {
    fmt::print(stderr, "parkfx {}: {}\n", chosen->name, e.what());
    return 2;
  } catch (const DataError& e) {
    fmt::print(stderr, "parkfx {}: {}\n", chosen->name, e.what());
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    fmt::print(stderr, "parkfx: {}\n", e.what());
    return 3;
  }
}
