#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "parkfx/diagnostics.hpp"
#include "parkfx/reference.hpp"

using namespace parkfx;

namespace {

double round_to(double v, int digits) {
  double s = std::pow(10.0, digits);
  return std::round(v * s) / s;
}

PoissonnessBin table_bin() {
  std::vector<double> lambda, y;
  const auto& counts = reference::poissonness_counts_lambda_1_4();
  for (std::size_t k = 0; k < counts.size(); ++k)
    for (long long i = 0; i < counts[k]; ++i) {
      lambda.push_back(1.4);
      y.push_back(static_cast<double>(k));
    }
  auto bins = poissonness_bins(lambda, y, 0.2);
  REQUIRE(bins.size() == 1);
  return bins.front();
}

}  // namespace

TEST_CASE("published frequency table at lambda 1.4") {
  auto bin = table_bin();
  CHECK(bin.n == 3132);
  CHECK(bin.lambda == doctest::Approx(1.4));
  const double rel[] = {0.26, 0.36, 0.22, 0.11, 0.04, 0.01, 0.00, 0.00};
  const double fitted[] = {0.25, 0.35, 0.24, 0.11, 0.04, 0.01, 0.00, 0.00};
  const double phis[] = {-1.35, -1.03, -0.80, -0.46, 0.00, -0.08, 0.83, 0.48};
  REQUIRE(bin.counts.size() == 8);
  for (int k = 0; k < 8; ++k) {
    CAPTURE(k);
    CHECK(std::abs(round_to(bin.rel_freq[k], 2) - rel[k]) <= 0.005);
    CHECK(std::abs(round_to(bin.fitted[k], 2) - fitted[k]) <= 0.005);
    REQUIRE(bin.phi[k].has_value());
    CHECK(std::abs(round_to(*bin.phi[k], 2) - phis[k]) <= 0.005);
  }
}

TEST_CASE("phi and the reference line") {
  CHECK(phi(0, 816, 3132) == doctest::Approx(std::log(816.0 / 3132.0)));
  CHECK(phi(3, 2, 12) == doctest::Approx(std::log(6.0 * 2.0 / 12.0)));
  auto [a, s] = poissonness_line(2.0);
  CHECK(a == -2.0);
  CHECK(s == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(poissonness_line(0.0), UsageError);

  // Exact Poisson frequencies fall on the line.
  for (long long k = 0; k < 6; ++k) {
    double pk = std::exp(-2.0 + k * std::log(2.0) - std::lgamma(k + 1.0));
    CHECK(phi(k, static_cast<long long>(std::llround(pk * 1e9)), 1000000000) ==
          doctest::Approx(a + s * k).epsilon(1e-6));
  }
}

TEST_CASE("binning by rounded fitted mean") {
  std::vector<double> lambda{0.05, 0.09, 0.21, 0.19, 0.6, 1.41, 1.39};
  std::vector<double> y{0, 1, 0, 2, 1, 3, 0};
  auto bins = poissonness_bins(lambda, y, 0.2);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].bin == 1);
  CHECK(bins[0].n == 2);
  CHECK(bins[1].lambda == doctest::Approx(0.6));
  CHECK(bins[2].counts == std::vector<long long>{1, 0, 0, 1});
  CHECK(!bins[2].phi[1].has_value());
  CHECK(plot_bins(bins, 2).size() == 2);

  std::ostringstream out;
  write_bin_csv(out, bins[2]);
  CHECK(out.str().find("1,0,0.0000,") != std::string::npos);
  CHECK(out.str().find(",NA\n") != std::string::npos);

  CHECK_THROWS_AS(poissonness_bins(std::vector<double>{1.0}, std::vector<double>{}, 0.2), UsageError);
  CHECK_THROWS_AS(poissonness_bins(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.0), UsageError);
}

TEST_CASE("plot has one panel per bin") {
  std::vector<double> lambda, y;
  for (int i = 0; i < 200; ++i) {
    lambda.push_back(0.2 * (1 + i % 5));
    y.push_back(i % 3);
  }
  auto bins = poissonness_bins(lambda, y, 0.2);
  REQUIRE(bins.size() == 5);
  auto svg = render_poissonness_svg(bins);
  int panels = 0;
  for (auto pos = svg.find("<g id=\"panel-"); pos != std::string::npos; pos = svg.find("<g id=\"panel-", pos + 1))
    ++panels;
  CHECK(panels == 5);
  CHECK(svg.find("data-phi=") != std::string::npos);
}

TEST_CASE("per-game residual variance") {
  auto cfg = parkfx::testing::small_sim_config();
  auto sim = simulate_corpus(cfg);
  auto model = fit(sim.observations, parkfx::testing::small_spec(cfg));
  auto row = game_residual_variance(model, sim.observations);

  std::map<std::string, double> resid;
  for (const auto& o : sim.observations) resid[o.game_id] += static_cast<double>(o.hrsum) - model.predict(o);
  double mean = 0;
  for (const auto& [g, r] : resid) mean += r;
  mean /= static_cast<double>(resid.size());
  double ss = 0;
  for (const auto& [g, r] : resid) ss += (r - mean) * (r - mean);
  CHECK(row.s2 == doctest::Approx(ss / static_cast<double>(resid.size() - 1)));
  CHECK(row.df == model.df());
  CHECK(row.aic == doctest::Approx(aic(model)));

  auto other = sim.observations;
  other[0].hrsum += 1;
  CHECK_THROWS_AS(game_residual_variance(model, other), DataError);

  std::ostringstream out;
  write_comparison_csv(out, {row});
  CHECK(out.str().rfind("model,df,s2,aic\n\"full\",", 0) == 0);
}
