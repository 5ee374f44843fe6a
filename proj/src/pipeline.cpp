#include "parkfx/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "parkfx/covariates.hpp"
#include "parkfx/diagnostics.hpp"
#include "parkfx/division_anova.hpp"
#include "parkfx/ingest.hpp"
#include "parkfx/park_effects.hpp"
#include "parkfx/simulate.hpp"

namespace parkfx {

namespace fs = std::filesystem;

namespace {

std::string in_out(const PipelineConfig& c, const std::string& explicit_path, const char* name) {
  return explicit_path.empty() ? (fs::path(c.out_dir) / name).string() : explicit_path;
}

std::string out_path(const PipelineConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

void ensure_out_dir(const PipelineConfig& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw DataError(fmt::format("cannot create output directory '{}': {}", c.out_dir, ec.message()));
}

template <class F>
void write_with(const std::string& path, F&& writer) {
  std::ostringstream out;
  writer(out);
  write_text_file(path, out.str());
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(fmt::format("{}: {}", path, e.what()));
  }
}

/// Timestamps live only in this sidecar so that the artifacts themselves
/// stay byte-identical across runs.
class RunMetadata {
 public:
  RunMetadata(const PipelineConfig& c, std::string command)
      : config_(c), command_(std::move(command)), started_(std::chrono::system_clock::now()) {}

  void finish(const nlohmann::json& extra = nlohmann::json::object()) const {
    auto stamp = [](std::chrono::system_clock::time_point t) {
      return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(t)));
    };
    nlohmann::json j{{"command", command_},
                     {"started_utc", stamp(started_)},
                     {"finished_utc", stamp(std::chrono::system_clock::now())},
                     {"seed", config_.seed},
                     {"rng", "philox4x32-10"},
                     {"out_dir", config_.out_dir},
                     {"details", extra}};
    write_json(out_path(config_, fmt::format("run_metadata_{}.json", command_)), j);
  }

 private:
  const PipelineConfig& config_;
  std::string command_;
  std::chrono::system_clock::time_point started_;
};

std::vector<GameMatchupObservation> load_observations(const PipelineConfig& c) {
  return read_observations_csv(in_out(c, c.observations, "observations.csv"));
}

ModelSpec spec_for(const PipelineConfig& c, const std::string& subset) {
  ModelSpec s = ModelSpec::subset(subset);
  s.season_mode = c.season_mode;
  s.parks = c.study.parks;
  return s;
}

FittedModel load_model(const PipelineConfig& c, const std::string& subset) {
  auto path = c.model.empty() ? out_path(c, fmt::format("model_{}.json", model_stem(subset))) : c.model;
  return model_from_json(read_json(path));
}

/// The model for a subset: reuse the stored fit when it belongs to these
/// observations, refit otherwise.
FittedModel model_for(const PipelineConfig& c, const std::string& subset,
                      const std::vector<GameMatchupObservation>& obs, const std::string& fp) {
  auto path = out_path(c, fmt::format("model_{}.json", model_stem(subset)));
  if (subset == c.subset && !c.model.empty()) path = c.model;
  if (fs::exists(path)) {
    FittedModel m = model_from_json(read_json(path));
    if (m.data_fingerprint == fp && m.spec.label == subset) return m;
  }
  return fit(obs, spec_for(c, subset), c.fit);
}

DivisionMap load_divisions(const PipelineConfig& c) {
  if (c.divisions.empty()) return default_divisions();
  DivisionMap map;
  std::vector<std::string> header;
  for (const auto& row : read_csv_file(c.divisions, &header)) {
    if (row.size() != 2) throw DataError(fmt::format("{}: expected park,division rows", c.divisions));
    map[row[0] == "LAA" ? "ANA" : row[0]] = row[1];
  }
  validate_divisions(map);
  return map;
}

std::string lambda_label(double lambda) { return fmt::format("{:.1f}", lambda); }

}  // namespace

std::string model_stem(const std::string& label) {
  std::string s = label;
  for (auto& ch : s)
    if (ch == ',') ch = '_';
  return s;
}

void cmd_ingest(const PipelineConfig& c) {
  if (c.event_dir.empty() || c.roster_dir.empty())
    throw UsageError("ingest needs --event-dir and --roster-dir");
  c.study.validate();
  ensure_out_dir(c);
  RunMetadata meta(c, "ingest");
  Roster roster = load_roster_dir(c.roster_dir);
  auto files = list_event_files(c.event_dir);
  if (files.empty()) throw DataError(fmt::format("no event files in '{}'", c.event_dir));
  ParseResult parsed = parse_event_files(files, roster, c.study.unknown_player);
  auto pas = filter_study_window(flatten(parsed), c.study);

  std::vector<GameLine> games;
  for (auto& g : game_lines(parsed)) {
    if (!c.study.seasons.count(g.season) || !find_park(c.study.parks, g.park)) continue;
    games.push_back(std::move(g));
  }
  write_with(out_path(c, "pa.csv"), [&](std::ostream& o) { write_pa_csv(o, pas); });
  write_with(out_path(c, "games.csv"), [&](std::ostream& o) { write_games_csv(o, games); });
  std::string warnings;
  for (const auto& w : parsed.warnings) warnings += w + "\n";
  write_text_file(out_path(c, "ingest_warnings.txt"), warnings);
  meta.finish({{"event_files", files.size()},
               {"games", games.size()},
               {"plate_appearances", pas.size()},
               {"skipped_pas", parsed.skipped_pas}});
}

void cmd_build(const PipelineConfig& c) {
  c.study.validate();
  ensure_out_dir(c);
  RunMetadata meta(c, "build");
  auto pas = filter_study_window(read_pa_csv(in_out(c, c.pa_table, "pa.csv")), c.study);
  if (pas.empty()) throw DataError("no plate appearances inside the study window");
  auto index = ElsewhereIndex::build(pas);
  auto obs = build_observations(pas, index, c.study);
  write_with(out_path(c, "observations.csv"), [&](std::ostream& o) { write_observations_csv(o, obs); });
  write_with(out_path(c, "matchup_frequency.csv"),
             [&](std::ostream& o) { write_frequency_csv(o, matchup_frequency_table(pas)); });
  meta.finish({{"plate_appearances", pas.size()}, {"observations", obs.size()}});
}

void cmd_fit(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "fit");
  auto obs = load_observations(c);
  Design design = build_design(obs, spec_for(c, c.subset));
  FittedModel m = fit(design, response(obs), c.fit);
  m.data_fingerprint = fingerprint(obs);
  auto stem = model_stem(c.subset);
  write_json(c.model.empty() ? out_path(c, fmt::format("model_{}.json", stem)) : c.model, to_json(m));
  write_text_file(out_path(c, fmt::format("design_{}.txt", stem)), design.report());
  meta.finish({{"subset", c.subset}, {"observations", obs.size()}, {"aic", aic(m)}});
}

void cmd_adjust(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "adjust");
  auto obs = load_observations(c);
  FittedModel m = load_model(c, "full");
  if (!m.spec.park_matchup) throw UsageError("adjusted means need a model with park x matchup effects");
  auto averages = matchup_averages(obs);
  auto rep = rank_report(m, obs, averages, c.cluster_threshold);

  write_with(out_path(c, "matchup_averages.csv"), [&](std::ostream& o) { write_matchup_averages_csv(o, averages); });
  nlohmann::json tables = nlohmann::json::object();
  for (Matchup mu : kMatchups) {
    const auto& rows = rep.by_matchup[index(mu)];
    write_with(out_path(c, fmt::format("adjusted_{}.csv", to_string(mu))),
               [&](std::ostream& o) { write_matchup_table_csv(o, rows); });
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : rows)
      list.push_back({{"park", r.park},
                      {"zB", r.zb},
                      {"zP", r.zp},
                      {"z", r.z},
                      {"rank_z", r.rank_z},
                      {"lambda", r.lambda},
                      {"se_lambda", r.se_lambda},
                      {"rank_lambda", r.rank_lambda},
                      {"rank_lambda_from_least", AdjustedMeansReport::from_least(r.rank_lambda, rows.size())},
                      {"hr_g", r.hr_per_game},
                      {"rank_hr_g", r.rank_hr_per_game},
                      {"rank_hr_g_from_least", AdjustedMeansReport::from_least(r.rank_hr_per_game, rows.size())},
                      {"delta_rank", r.delta_rank},
                      {"games", r.games}});
    tables[std::string(to_string(mu))] = {{"mean_se", rep.mean_se[index(mu)]}, {"rows", list}};
  }
  write_with(out_path(c, "marginal.csv"), [&](std::ostream& o) { write_marginal_table_csv(o, rep.marginals); });
  write_text_file(out_path(c, "marginal_ecdf.svg"), render_ecdf_svg(rep.marginals));
  nlohmann::json marg = nlohmann::json::array();
  for (const auto& r : rep.marginals)
    marg.push_back({{"park", r.park},
                    {"cluster", r.cluster},
                    {"lambda", r.lambda},
                    {"rank_lambda", r.rank_lambda},
                    {"rank_lambda_from_least", AdjustedMeansReport::from_least(r.rank_lambda, rep.marginals.size())},
                    {"hr_g", r.hr_per_game},
                    {"rank_hr_g", r.rank_hr_per_game},
                    {"delta_rank", r.delta_rank}});
  write_json(out_path(c, "adjusted_means.json"),
             {{"rank_convention", "rank 1 = most home-run friendly; delta_rank = rank_hr_g - rank_lambda"},
              {"cluster_threshold", c.cluster_threshold},
              {"matchups", tables},
              {"marginals", marg}});
  meta.finish({{"observations", obs.size()}});
}

void cmd_diagnose(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "diagnose");
  auto obs = load_observations(c);
  const auto fp = fingerprint(obs);
  FittedModel full = model_for(c, "full", obs, fp);

  std::vector<double> lambda, y = response(obs);
  lambda.reserve(obs.size());
  for (const auto& o : obs) lambda.push_back(full.predict(o));
  auto bins = poissonness_bins(lambda, y, c.bin_width);
  nlohmann::json index = nlohmann::json::array();
  for (const auto& b : bins) {
    auto name = fmt::format("poissonness_lambda_{}.csv", lambda_label(b.lambda));
    write_with(out_path(c, name), [&](std::ostream& o) { write_bin_csv(o, b); });
    index.push_back({{"lambda", b.lambda}, {"n", b.n}, {"file", name}, {"plotted", b.n >= c.min_bin_n}});
  }
  write_text_file(out_path(c, "poissonness.svg"), render_poissonness_svg(plot_bins(bins, c.min_bin_n)));

  std::vector<FittedModel> models;
  for (const auto& label : ModelSpec::subset_names())
    models.push_back(label == "full" ? full : model_for(c, label, obs, fp));
  auto rows = game_residual_variance(models, obs);
  write_with(out_path(c, "model_comparison.csv"), [&](std::ostream& o) { write_comparison_csv(o, rows); });
  write_json(out_path(c, "poissonness_bins.json"),
             {{"bin_width", c.bin_width}, {"min_plot_n", c.min_bin_n}, {"bins", index}});
  meta.finish({{"observations", obs.size()}, {"bins", bins.size()}});
}

void cmd_anova(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "anova");
  auto obs = load_observations(c);
  FittedModel m = load_model(c, "full");
  auto divisions = load_divisions(c);
  auto rep = rank_report(m, obs, matchup_averages(obs), c.cluster_threshold);
  std::vector<AnovaResult> results;
  for (Matchup mu : kMatchups) results.push_back(one_way_anova(adjustment_magnitudes(rep, mu), divisions, mu));
  write_with(out_path(c, "anova.csv"), [&](std::ostream& o) { write_anova_csv(o, results); });
  nlohmann::json detail = nlohmann::json::array();
  for (const auto& r : results)
    detail.push_back({{"matchup", to_string(r.matchup)},
                      {"ss_division", r.ss_division},
                      {"ss_within", r.ss_within},
                      {"ss_total", r.ss_total},
                      {"df_division", r.df_division},
                      {"df_error", r.df_error},
                      {"df_total", r.df_total},
                      {"r2", r.r2_defined ? nlohmann::json(r.r2) : nlohmann::json(nullptr)}});
  write_json(out_path(c, "anova.json"), detail);
  meta.finish();
}

void cmd_simulate(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "simulate");
  SimConfig s = SimConfig::published();
  s.seed = c.seed;
  s.games_per_park_season = c.sim_games;
  s.sigma2_season = c.sim_sigma2;
  s.covariate_cv = c.sim_cv;
  if (c.sim_first_season > c.sim_last_season) throw UsageError("simulation season range is empty");
  s.seasons.clear();
  for (int y = c.sim_first_season; y <= c.sim_last_season; ++y)
    if (std::find(c.sim_skip_seasons.begin(), c.sim_skip_seasons.end(), y) == c.sim_skip_seasons.end())
      s.seasons.push_back(y);
  auto sim = simulate_corpus(s);
  write_with(out_path(c, "observations.csv"),
             [&](std::ostream& o) { write_observations_csv(o, sim.observations); });
  write_json(out_path(c, "truth.json"), truth_json(s, sim));
  meta.finish({{"observations", sim.observations.size()}});
}

void cmd_recover(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "recover");
  auto truth = read_json(in_out(c, c.truth, "truth.json"));
  FittedModel m = load_model(c, c.subset);
  auto rep = recovery_report(truth, m);
  write_with(out_path(c, "recovery.csv"), [&](std::ostream& o) {
    o << "name,truth,estimate,se,z\n";
    for (const auto& r : rep.rows)
      o << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.4f}\n", r.name, r.truth, r.estimate, r.se, r.z);
  });
  write_json(out_path(c, "recovery_summary.json"),
             {{"parameters", rep.rows.size()},
              {"fraction_abs_z_below_2", rep.frac_within_2},
              {"fraction_abs_z_below_3", rep.frac_within_3},
              {"reference_cell_estimate", rep.reference_estimate},
              {"mean_se_ll_park_effects", rep.mean_se_ll}});
  meta.finish({{"subset", c.subset}});
}

void cmd_hrpf(const PipelineConfig& c) {
  ensure_out_dir(c);
  RunMetadata meta(c, "hrpf");
  auto games = parse_games_csv(read_text_file(in_out(c, c.games_table, "games.csv")));
  write_with(out_path(c, "hrpf.csv"), [&](std::ostream& o) { write_hrpf_csv(o, team_hr_tallies(games)); });
  meta.finish({{"games", games.size()}});
}

}  // namespace parkfx
