#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "parkfx/park_effects.hpp"
#include "parkfx/reference.hpp"
#include "parkfx/simulate.hpp"

using namespace parkfx;
using namespace parkfx::testing;

TEST_CASE("published coefficients give the Yankee Stadium LR mean") {
  auto model = published_model();
  auto avg = published_averages();
  auto nya = adjusted_mean(model, "NYA", Matchup::LR, avg);
  CHECK(nya.lambda == doctest::Approx(0.875).epsilon(0.01 / 0.875));
  CHECK(nya.se == 0.0);

  // With the four-decimal effect instead of the rounded one.
  model.coefficients[model.cell_column_for("NYA", Matchup::LR)] = reference::kYankeeStadiumLR;
  CHECK(adjusted_mean(model, "NYA", Matchup::LR, avg).lambda == doctest::Approx(0.875).epsilon(0.01 / 0.875));
}

TEST_CASE("reference cell adjusted mean uses no park term") {
  auto model = published_model();
  auto avg = published_averages();
  const auto& a = avg[Matchup::RR];
  double expected = std::exp(reference::kIntercept + reference::kBatterSlope * a.zb + reference::kPitcherSlope * a.zp);
  CHECK(adjusted_mean(model, "WAS", Matchup::RR, avg).lambda == doctest::Approx(expected));
}

TEST_CASE("personnel summary for Cleveland LR") {
  auto model = published_model();
  CHECK(personnel_summary(model, 0.988, 0.959) == doctest::Approx(1.368).epsilon(0.005 / 1.368));
}

TEST_CASE("delta-method standard error") {
  auto model = published_model();
  auto avg = published_averages();
  const auto n = model.coefficients.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n) * 0.01;
  model.cov_fixed = a * a.transpose();
  int c = model.cell_column_for("BOS", Matchup::RL);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  g[0] = 1;
  g[1] = avg[Matchup::RL].zb;
  g[2] = avg[Matchup::RL].zp;
  g[c] = 1;
  auto r = adjusted_mean(model, "BOS", Matchup::RL, avg);
  CHECK(r.se == doctest::Approx(r.lambda * std::sqrt(g.dot(model.cov_fixed * g))));
}

TEST_CASE("published marginal means cluster as printed") {
  const auto& rows = reference::marginal_means();
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.lambda);
  auto labels = cluster_marginals(v, kDefaultClusterThreshold);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].park);
    CHECK(labels[i] == rows[i].cluster);
  }
  CHECK(cluster_marginals({1.0, 1.0, 1.0}, 0.0) == std::vector<int>{1, 1, 1});
  CHECK(cluster_marginals({3.0, 1.0, 2.0}, 0.5) == std::vector<int>{3, 1, 2});
}

TEST_CASE("rank report on a simulated fit") {
  auto cfg = small_sim_config();
  auto sim = simulate_corpus(cfg);
  auto model = fit(sim.observations, small_spec(cfg));
  auto avg = matchup_averages(sim.observations);
  auto rep = rank_report(model, sim.observations, avg);

  for (Matchup m : kMatchups) {
    const auto& rows = rep.by_matchup[index(m)];
    REQUIRE(rows.size() == 3);
    std::set<int> rl, rh;
    for (const auto& r : rows) {
      rl.insert(r.rank_lambda);
      rh.insert(r.rank_hr_per_game);
      CHECK(r.delta_rank == r.rank_hr_per_game - r.rank_lambda);
      CHECK(r.lambda == doctest::Approx(adjusted_mean(model, r.park, m, avg).lambda));
    }
    CHECK(rl == std::set<int>{1, 2, 3});
    CHECK(rh == std::set<int>{1, 2, 3});
  }
  for (const auto& r : rep.marginals) {
    double s = r.lambda_by_matchup[0] + r.lambda_by_matchup[1] + r.lambda_by_matchup[2] + r.lambda_by_matchup[3];
    CHECK(r.lambda == doctest::Approx(s));
    CHECK(r.games == cfg.games_per_park_season * static_cast<long long>(cfg.seasons.size()));
    CHECK(AdjustedMeansReport::from_least(r.rank_lambda, 3) == 4 - r.rank_lambda);
  }

  auto other = sim.observations;
  other.pop_back();
  CHECK_THROWS_AS(rank_report(model, other, avg), DataError);
}

TEST_CASE("matchup averages are per-observation means") {
  std::vector<GameMatchupObservation> obs{
      {"G1", 2015, "NYA", Matchup::LL, 0, 1.0, 2.0, 10},
      {"G2", 2015, "NYA", Matchup::LL, 1, 3.0, 4.0, 20},
      {"G1", 2015, "NYA", Matchup::RR, 1, 5.0, 5.0, 40},
  };
  auto a = matchup_averages(obs);
  CHECK(a[Matchup::LL].pa_per_game == 15.0);
  CHECK(a[Matchup::LL].zb == 2.0);
  CHECK(a[Matchup::LL].zp == 3.0);
  CHECK(a[Matchup::LL].games == 2);
  CHECK(a[Matchup::RR].games == 1);
  CHECK(a[Matchup::LR].games == 0);
}

TEST_CASE("classical park factor") {
  TeamHrTally t{100, 80, 81, 90, 72, 81};
  CHECK(hrpf(t) == doctest::Approx(180.0 / 162.0));
  CHECK_THROWS_AS(hrpf(TeamHrTally{1, 1, 1, 0, 0, 1}), DataError);
  CHECK_THROWS_AS(hrpf(TeamHrTally{1, 1, 0, 1, 1, 1}), DataError);

  std::vector<GameLine> games{
      {"NYA201504100", 2015, "NYA", "NYA", "BOS", 2, 4},
      {"BOS201504110", 2015, "BOS", "BOS", "NYA", 2, 1},
  };
  auto tallies = team_hr_tallies(games);
  const auto& nya = tallies.at("NYA");
  CHECK(nya.home_hr_hit == 2);
  CHECK(nya.home_hr_allowed == 4);
  CHECK(nya.road_hr_hit == 1);
  CHECK(nya.road_hr_allowed == 2);
  CHECK(hrpf(nya) == doctest::Approx(2.0));

  std::ostringstream out;
  write_games_csv(out, games);
  CHECK(parse_games_csv(out.str()) == games);
}

TEST_CASE("table writers and ECDF plot") {
  auto model = published_model();
  auto avg = published_averages();
  std::vector<GameMatchupObservation> obs;
  for (const auto& p : canonical_parks())
    for (Matchup m : kMatchups) obs.push_back({p + "1", 2015, p, m, 1, 1.0, 1.0, 10});
  auto rep = rank_report(model, obs, avg);

  std::ostringstream t7, t8;
  write_matchup_table_csv(t7, rep.by_matchup[index(Matchup::LR)]);
  write_marginal_table_csv(t8, rep.marginals);
  auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  CHECK(lines(t7.str()) == 31);
  CHECK(lines(t8.str()) == 31);

  // Rows come out in increasing order of the adjusted mean.
  std::istringstream in(t8.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  auto lowest = std::min_element(rep.marginals.begin(), rep.marginals.end(),
                                 [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  CHECK(line.rfind("1," + lowest->park + ",", 0) == 0);

  auto svg = render_ecdf_svg(rep.marginals);
  CHECK(svg.rfind("<svg", 0) == 0);
  for (const auto& p : canonical_parks()) CHECK(svg.find(">" + p + " (") != std::string::npos);
}
