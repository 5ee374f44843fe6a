#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "parkfx/simulate.hpp"

using namespace parkfx;
using parkfx::testing::small_sim_config;
using parkfx::testing::small_spec;

TEST_CASE("simulation is deterministic in its config") {
  auto cfg = small_sim_config();
  auto a = simulate_corpus(cfg);
  auto b = simulate_corpus(cfg);
  CHECK(a.observations == b.observations);
  CHECK(a.season_effects == b.season_effects);
  cfg.seed += 1;
  auto c = simulate_corpus(cfg);
  CHECK(a.observations != c.observations);
}

TEST_CASE("shards draw from their own substreams") {
  auto cfg = small_sim_config();
  auto a = simulate_corpus(cfg);
  cfg.seasons.push_back(2016);
  auto b = simulate_corpus(cfg);
  std::vector<GameMatchupObservation> a2015, b2015;
  for (const auto& o : a.observations)
    if (o.season == 2015) a2015.push_back(o);
  for (const auto& o : b.observations)
    if (o.season == 2015) b2015.push_back(o);
  CHECK(a2015 == b2015);
}

TEST_CASE("simulated rows are well formed") {
  auto cfg = small_sim_config();
  auto sim = simulate_corpus(cfg);
  REQUIRE(sim.lambda.size() == sim.observations.size());
  std::set<std::string> games;
  for (std::size_t i = 0; i < sim.observations.size(); ++i) {
    const auto& o = sim.observations[i];
    CHECK(o.pa > 0);
    CHECK(o.hrsum <= o.pa);
    CHECK(o.zb >= 0.0);
    CHECK(sim.lambda[i] > 0.0);
    CHECK(o.game_id.size() == 12);
    CHECK(o.game_id.substr(0, 3) == o.park);
    games.insert(o.game_id);
  }
  CHECK(games.size() == cfg.parks.size() * cfg.seasons.size() * static_cast<std::size_t>(cfg.games_per_park_season));
}

TEST_CASE("config validation") {
  auto cfg = small_sim_config();
  cfg.park_effects.pop_back();
  CHECK_THROWS_AS(simulate_corpus(cfg), UsageError);
  cfg = small_sim_config();
  cfg.games_per_park_season = 0;
  CHECK_THROWS_AS(simulate_corpus(cfg), UsageError);
  cfg = small_sim_config();
  cfg.sigma2_season = -1;
  CHECK_THROWS_AS(simulate_corpus(cfg), UsageError);
  CHECK_NOTHROW(SimConfig::published().validate());
  CHECK(SimConfig::published().seasons.size() == 13);
}

TEST_CASE("truth JSON round trip") {
  auto cfg = small_sim_config();
  auto sim = simulate_corpus(cfg);
  auto j = truth_json(cfg, sim);
  auto back = sim_config_from_json(j);
  CHECK(back.parks == cfg.parks);
  CHECK(back.seasons == cfg.seasons);
  CHECK(back.seed == cfg.seed);
  CHECK(back.beta0 == cfg.beta0);
  CHECK(simulate_corpus(back).observations == sim.observations);
}

TEST_CASE("small-scale recovery") {
  auto cfg = small_sim_config();
  cfg.games_per_park_season = 200;
  auto sim = simulate_corpus(cfg);
  auto model = fit(sim.observations, small_spec(cfg));
  auto rec = recovery_report(truth_json(cfg, sim), model);
  CHECK(rec.rows.size() == model.columns.size());
  CHECK(rec.reference_estimate == 0.0);
  CHECK(rec.frac_within_3 >= 0.85);
  for (const auto& r : rec.rows) CHECK(r.z == doctest::Approx((r.estimate - r.truth) / r.se));
}

TEST_CASE("published configuration gives a league-like home-run rate") {
  auto sim = simulate_corpus(SimConfig::published());
  double hr = 0, pa = 0;
  for (const auto& o : sim.observations) {
    hr += static_cast<double>(o.hrsum);
    pa += static_cast<double>(o.pa);
  }
  CHECK(pa == doctest::Approx(2451105.0).epsilon(0.02));
  CHECK(std::abs(hr / pa - 70994.0 / 2451105.0) < 0.003);
}
