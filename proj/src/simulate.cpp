#include "parkfx/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "parkfx/reference.hpp"
#include "parkfx/rng.hpp"

namespace parkfx {

SimConfig SimConfig::published() {
  SimConfig c;
  c.beta0 = reference::kIntercept;
  c.betaB = reference::kBatterSlope;
  c.betaP = reference::kPitcherSlope;
  c.parks = canonical_parks();
  for (const auto& p : c.parks) c.park_effects.push_back(reference::park_effects().at(p));
  c.sigma2_season = 0.015;
  for (int y = 2010; y <= 2023; ++y)
    if (y != 2020) c.seasons.push_back(y);
  c.games_per_park_season = 81;
  const auto& avg = reference::matchup_averages();
  for (std::size_t m = 0; m < 4; ++m) c.covariates[m] = {avg[m].pa_per_game, avg[m].zb, avg[m].zp};
  return c;
}

void SimConfig::validate() const {
  if (parks.empty()) throw UsageError("simulation needs at least one park");
  if (park_effects.size() != parks.size())
    throw UsageError(fmt::format("simulation has {} parks but {} effect rows", parks.size(),
                                 park_effects.size()));
  if (seasons.empty()) throw UsageError("simulation needs at least one season");
  if (games_per_park_season <= 0) throw UsageError("games per park-season must be positive");
  if (!(sigma2_season >= 0.0)) throw UsageError("season variance must be nonnegative");
  if (!(covariate_cv >= 0.0)) throw UsageError("covariate CV must be nonnegative");
  for (const auto& c : covariates)
    if (!(c.pa_mean >= 0.0) || !(c.zb_mean >= 0.0) || !(c.zp_mean >= 0.0))
      throw UsageError("covariate means must be nonnegative");
}

SimResult simulate_corpus(const SimConfig& config) {
  config.validate();
  SimResult r;
  PhiloxStream season_stream(config.seed, 0xFFFFFFFFu, 0xFFFFFFFFu);
  const double sd = std::sqrt(config.sigma2_season);
  for (std::size_t s = 0; s < config.seasons.size(); ++s)
    r.season_effects.push_back(sd * season_stream.normal());

  for (std::size_t s = 0; s < config.seasons.size(); ++s) {
    const int season = config.seasons[s];
    for (std::size_t p = 0; p < config.parks.size(); ++p) {
      PhiloxStream rng(config.seed, static_cast<std::uint32_t>(season), static_cast<std::uint32_t>(p));
      for (int g = 0; g < config.games_per_park_season; ++g) {
        std::string game_id = fmt::format("{}{}{:04d}0", config.parks[p], season, g + 1);
        for (Matchup m : kMatchups) {
          const auto& cov = config.covariates[index(m)];
          long long pa = rng.poisson(cov.pa_mean);
          double zb = 0.0, zp = 0.0;
          if (pa > 0) {
            double scale = static_cast<double>(pa) / cov.pa_mean;
            zb = rng.lognormal_mean_cv(cov.zb_mean * scale, config.covariate_cv);
            zp = rng.lognormal_mean_cv(cov.zp_mean * scale, config.covariate_cv);
          }
          double lambda = std::exp(config.beta0 + config.betaB * zb + config.betaP * zp +
                                   config.park_effects[p][index(m)] + r.season_effects[s]);
          long long y = rng.poisson(lambda);
          if (pa == 0) continue;
          GameMatchupObservation o;
          o.game_id = game_id;
          o.season = season;
          o.park = config.parks[p];
          o.matchup = m;
          o.hrsum = y;
          o.zb = zb;
          o.zp = zp;
          o.pa = std::max(pa, y);
          r.observations.push_back(std::move(o));
          r.lambda.push_back(lambda);
        }
      }
    }
  }
  return r;
}

nlohmann::json truth_json(const SimConfig& c, const SimResult& r) {
  using nlohmann::json;
  json effects = json::object();
  for (std::size_t p = 0; p < c.parks.size(); ++p) {
    json cell = json::object();
    for (Matchup m : kMatchups) cell[std::string(to_string(m))] = c.park_effects[p][index(m)];
    effects[c.parks[p]] = cell;
  }
  json cov = json::object();
  for (Matchup m : kMatchups) {
    const auto& v = c.covariates[index(m)];
    cov[std::string(to_string(m))] = {{"pa_mean", v.pa_mean}, {"zb_mean", v.zb_mean}, {"zp_mean", v.zp_mean}};
  }
  return json{{"rng", "philox4x32-10"},
              {"seed", c.seed},
              {"beta0", c.beta0},
              {"betaB", c.betaB},
              {"betaP", c.betaP},
              {"parks", c.parks},
              {"park_effects", effects},
              {"sigma2_season", c.sigma2_season},
              {"seasons", c.seasons},
              {"season_effects", r.season_effects},
              {"games_per_park_season", c.games_per_park_season},
              {"covariates", cov},
              {"covariate_cv", c.covariate_cv},
              {"n_obs", r.observations.size()}};
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  try {
    SimConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.beta0 = j.at("beta0").get<double>();
    c.betaB = j.at("betaB").get<double>();
    c.betaP = j.at("betaP").get<double>();
    c.parks = j.at("parks").get<std::vector<std::string>>();
    c.park_effects.clear();
    for (const auto& p : c.parks) {
      std::array<double, 4> e{};
      for (Matchup m : kMatchups)
        e[index(m)] = j.at("park_effects").at(p).at(std::string(to_string(m))).get<double>();
      c.park_effects.push_back(e);
    }
    c.sigma2_season = j.at("sigma2_season").get<double>();
    c.seasons = j.at("seasons").get<std::vector<int>>();
    c.games_per_park_season = j.at("games_per_park_season").get<int>();
    for (Matchup m : kMatchups) {
      const auto& v = j.at("covariates").at(std::string(to_string(m)));
      c.covariates[index(m)] = {v.at("pa_mean").get<double>(), v.at("zb_mean").get<double>(),
                                v.at("zp_mean").get<double>()};
    }
    c.covariate_cv = j.at("covariate_cv").get<double>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("simulation config: {}", e.what()));
  }
}

RecoverySummary recovery_report(const nlohmann::json& truth, const FittedModel& model) {
  SimConfig c = sim_config_from_json(truth);
  std::vector<double> season_effects;
  try {
    season_effects = truth.at("season_effects").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("truth record: {}", e.what()));
  }
  if (season_effects.size() != c.seasons.size())
    throw DataError("truth record: season effects do not match seasons");
  if (c.parks != model.spec.parks) throw DataError("truth and model use different park sets");

  auto ref_park = find_park(c.parks, model.spec.reference.park);
  if (!ref_park) throw DataError("reference park missing from the truth record");
  const double ref = c.park_effects[*ref_park][index(model.spec.reference.matchup)];
  double season_mean = 0.0;
  for (double s : season_effects) season_mean += s;
  season_mean /= static_cast<double>(season_effects.size());
  const bool fixed_seasons = model.spec.season_mode == SeasonMode::fixed;

  RecoverySummary out;
  std::size_t within2 = 0, within3 = 0;
  for (std::size_t j = 0; j < model.columns.size(); ++j) {
    const auto& name = model.columns[j];
    double t = 0.0;
    if (name == "(Intercept)") {
      t = c.beta0 + (model.spec.park_matchup ? ref : 0.0) + (fixed_seasons ? season_mean : 0.0);
    } else if (name == "zB") {
      t = c.betaB;
    } else if (name == "zP") {
      t = c.betaP;
    } else if (name.rfind("season[", 0) == 0) {
      int year = static_cast<int>(parse_int(std::string_view(name).substr(7, name.size() - 8)));
      auto it = std::find(c.seasons.begin(), c.seasons.end(), year);
      if (it == c.seasons.end()) throw DataError(fmt::format("season {} is not in the truth record", year));
      t = season_effects[static_cast<std::size_t>(it - c.seasons.begin())] - season_mean;
    } else {
      auto colon = name.find(':');
      if (colon == std::string::npos) throw DataError(fmt::format("unrecognised coefficient '{}'", name));
      auto p = find_park(c.parks, name.substr(0, colon));
      if (!p) throw DataError(fmt::format("coefficient '{}' names an unknown park", name));
      t = c.park_effects[*p][index(parse_matchup(name.substr(colon + 1)))] - ref;
    }
    RecoveryRow row{name, t, model.coefficients[static_cast<Eigen::Index>(j)], model.standard_error(j), 0.0};
    row.z = row.se > 0.0 ? (row.estimate - row.truth) / row.se : (row.estimate == row.truth ? 0.0 : INFINITY);
    within2 += std::abs(row.z) < 2.0 ? 1 : 0;
    within3 += std::abs(row.z) < 3.0 ? 1 : 0;
    out.rows.push_back(std::move(row));
  }
  auto n = static_cast<double>(std::max<std::size_t>(out.rows.size(), 1));
  out.frac_within_2 = static_cast<double>(within2) / n;
  out.frac_within_3 = static_cast<double>(within3) / n;
  if (model.spec.park_matchup)
    out.reference_estimate = model.park_effects[*ref_park][index(model.spec.reference.matchup)];

  double se_sum = 0.0;
  int se_n = 0;
  for (std::size_t p = 0; p < model.park_se.size(); ++p) {
    double se = model.park_se[p][index(Matchup::LL)];
    bool is_ref = model.spec.parks[p] == model.spec.reference.park && model.spec.reference.matchup == Matchup::LL;
    if (std::isfinite(se) && !is_ref) {
      se_sum += se;
      ++se_n;
    }
  }
  out.mean_se_ll = se_n > 0 ? se_sum / se_n : 0.0;
  return out;
}

}  // namespace parkfx
