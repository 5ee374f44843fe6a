#pragma once

#include <string>
#include <vector>

#include "parkfx/glmm.hpp"
#include "parkfx/park_effects.hpp"
#include "parkfx/reference.hpp"
#include "parkfx/simulate.hpp"

namespace parkfx::testing {

/// Three parks, six seasons: large enough for every model term, fast to fit.
inline SimConfig small_sim_config(std::uint64_t seed = 11) {
  SimConfig c = SimConfig::published();
  c.parks = {"BOS", "NYA", "WAS"};
  c.park_effects.clear();
  for (const auto& p : c.parks) c.park_effects.push_back(reference::park_effects().at(p));
  c.seasons = {2010, 2011, 2012, 2013, 2014, 2015};
  c.games_per_park_season = 40;
  c.sigma2_season = 0.05;
  c.seed = seed;
  return c;
}

inline ModelSpec small_spec(const SimConfig& c, SeasonMode mode = SeasonMode::random) {
  ModelSpec s = ModelSpec::full();
  s.parks = c.parks;
  s.season_mode = mode;
  return s;
}

/// The published coefficients wrapped as a fitted model (no season term,
/// zero covariance).
inline FittedModel published_model() {
  std::vector<GameMatchupObservation> cells;
  for (const auto& park : canonical_parks())
    for (Matchup m : kMatchups) cells.push_back({park + "2015", 2015, park, m, 1, 1.0, 1.0, 30});
  ModelSpec spec = ModelSpec::full();
  spec.season_mode = SeasonMode::none;
  Design d = build_design(cells, spec);

  FittedModel fm;
  fm.spec = spec;
  fm.columns = d.columns;
  fm.cell_column = d.cell_column;
  fm.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.n_fixed()));
  fm.coefficients[0] = fm.beta0 = reference::kIntercept;
  fm.coefficients[d.zb_column] = fm.betaB = reference::kBatterSlope;
  fm.coefficients[d.zp_column] = fm.betaP = reference::kPitcherSlope;
  for (std::size_t p = 0; p < spec.parks.size(); ++p) {
    const auto& eff = reference::park_effects().at(spec.parks[p]);
    fm.park_effects.push_back(eff);
    for (Matchup m : kMatchups) {
      int c = d.cell_column[p * 4 + index(m)];
      if (c >= 0) fm.coefficients[c] = eff[index(m)];
    }
  }
  fm.cov_fixed = Eigen::MatrixXd::Zero(fm.coefficients.size(), fm.coefficients.size());
  fm.n_obs = cells.size();
  return fm;
}

inline MatchupAverages published_averages() {
  MatchupAverages a;
  for (Matchup m : kMatchups) {
    const auto& r = reference::matchup_averages()[index(m)];
    a[m] = {r.pa_per_game, r.zb, r.zp, 0};
  }
  return a;
}

}  // namespace parkfx::testing
