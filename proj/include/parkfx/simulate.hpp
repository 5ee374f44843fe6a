#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "parkfx/common.hpp"
#include "parkfx/covariates.hpp"
#include "parkfx/glmm.hpp"

namespace parkfx {

/// Per-matchup covariate generator: PA count ~ Poisson(pa_mean); zB and zP
/// log-normal with means scaled by pa / pa_mean and a common CV.
struct CovariateSpec {
  double pa_mean = 0.0;
  double zb_mean = 0.0;
  double zp_mean = 0.0;
};

struct SimConfig {
  double beta0 = 0.0;
  double betaB = 0.0;
  double betaP = 0.0;
  std::vector<std::string> parks = canonical_parks();
  std::vector<std::array<double, 4>> park_effects;  // aligned with parks
  double sigma2_season = 0.0;
  std::vector<int> seasons;
  int games_per_park_season = 81;
  std::array<CovariateSpec, 4> covariates{};
  double covariate_cv = 0.25;
  std::uint64_t seed = 20100405;

  /// Published estimates, 2010-2023 without 2020, 81 home games per park.
  static SimConfig published();
  void validate() const;
};

struct SimResult {
  std::vector<GameMatchupObservation> observations;
  std::vector<double> season_effects;  // aligned with config.seasons
  std::vector<double> lambda;          // true mean per observation
};

/// Deterministic in the config: each (season, park) shard draws from its own
/// Philox substream, season effects from a separate one.
SimResult simulate_corpus(const SimConfig& config);

nlohmann::json truth_json(const SimConfig& config, const SimResult& result);
SimConfig sim_config_from_json(const nlohmann::json& j);

struct RecoveryRow {
  std::string name;
  double truth = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double z = 0.0;
};

struct RecoverySummary {
  std::vector<RecoveryRow> rows;  // estimated fixed effects, in model column order
  double frac_within_2 = 0.0;
  double frac_within_3 = 0.0;
  double reference_estimate = 0.0;  // pinned reference cell as reported by the model
  double mean_se_ll = 0.0;          // average SE of the LL park effects
};

/// Truth re-expressed in the model's parametrisation (reference cell at 0);
/// z = (estimate - truth) / SE per fixed effect.
RecoverySummary recovery_report(const nlohmann::json& truth, const FittedModel& model);

}  // namespace parkfx
