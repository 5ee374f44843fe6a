#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "parkfx/division_anova.hpp"

using namespace parkfx;

namespace {

/// Adjusted LR mean and empirical HR/g per park as printed in the LR table.
const std::map<std::string, std::pair<double, double>> kPrintedLR{
    {"SFN", {0.468, 0.517}}, {"MIA", {0.523, 0.535}}, {"OAK", {0.543, 0.619}}, {"BOS", {0.557, 0.701}},
    {"SDN", {0.581, 0.591}}, {"KCA", {0.582, 0.657}}, {"MIN", {0.600, 0.771}}, {"SLN", {0.606, 0.605}},
    {"TBA", {0.617, 0.712}}, {"DET", {0.624, 0.639}}, {"SEA", {0.624, 0.759}}, {"CHN", {0.626, 0.696}},
    {"PIT", {0.637, 0.746}}, {"ATL", {0.644, 0.752}}, {"CLE", {0.657, 1.025}}, {"HOU", {0.659, 0.699}},
    {"NYN", {0.665, 0.810}}, {"ANA", {0.673, 0.706}}, {"ARI", {0.679, 0.733}}, {"WAS", {0.686, 0.787}},
    {"TOR", {0.733, 0.741}}, {"LAN", {0.741, 0.736}}, {"TEX", {0.764, 0.877}}, {"CHA", {0.767, 0.722}},
    {"COL", {0.796, 0.811}}, {"PHI", {0.797, 0.902}}, {"MIL", {0.822, 0.829}}, {"BAL", {0.856, 0.946}},
    {"NYA", {0.875, 1.025}}, {"CIN", {0.926, 0.992}},
};

struct BruteForce {
  double ss_div = 0, ss_within = 0, ss_total = 0;
};

BruteForce brute(const std::map<std::string, double>& v, const DivisionMap& divs) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& [p, x] : v) groups[divs.at(p)].push_back(x);
  double grand = 0;
  for (const auto& [p, x] : v) grand += x;
  grand /= static_cast<double>(v.size());
  BruteForce b;
  for (const auto& [d, xs] : groups) {
    double m = 0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    for (double x : xs) {
      b.ss_div += (m - grand) * (m - grand);
      b.ss_within += (x - m) * (x - m);
      b.ss_total += (x - grand) * (x - grand);
    }
  }
  return b;
}

}  // namespace

TEST_CASE("default division map") {
  const auto& d = default_divisions();
  CHECK_NOTHROW(validate_divisions(d));
  CHECK(division_of(d, "LAA") == division_of(d, "ANA"));
  CHECK(division_of(d, "NYA") == division_of(d, "BOS"));
  CHECK(division_of(d, "NYA") != division_of(d, "NYN"));
  CHECK_THROWS_AS(division_of(d, "MON"), DataError);

  auto bad = d;
  bad.erase("NYA");
  CHECK_THROWS_AS(validate_divisions(bad), UsageError);
  bad = d;
  bad["NYA"] = bad["NYN"];
  CHECK_THROWS_AS(validate_divisions(bad), UsageError);
}

TEST_CASE("sum-of-squares decomposition matches brute force") {
  const auto& divs = default_divisions();
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd(0.0, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<std::string, double> v;
    for (const auto& [p, d] : divs) v[p] = nd(gen) + (d.front() == 'A' ? 0.1 : 0.0);
    auto r = one_way_anova(v, divs);
    auto b = brute(v, divs);
    CHECK(std::abs(r.ss_division - b.ss_div) <= 1e-9 * b.ss_total);
    CHECK(std::abs(r.ss_within - b.ss_within) <= 1e-9 * b.ss_total);
    CHECK(std::abs(r.ss_total - b.ss_total) <= 1e-9 * b.ss_total);
    CHECK(std::abs(r.ss_division + r.ss_within - r.ss_total) <= 1e-9 * r.ss_total);
    CHECK(r.r2 == doctest::Approx(b.ss_div / b.ss_total));
    CHECK(r.df_division == 5);
    CHECK(r.df_error == 24);
    CHECK(r.df_total == 29);
  }
}

TEST_CASE("degenerate inputs") {
  const auto& divs = default_divisions();
  std::map<std::string, double> constant, by_division;
  int i = 0;
  std::map<std::string, double> level;
  for (const auto& [p, d] : divs) {
    constant[p] = 0.25;
    if (!level.count(d)) level[d] = static_cast<double>(i++);
    by_division[p] = level[d];
  }
  auto c = one_way_anova(constant, divs);
  CHECK(c.ss_total == 0.0);
  CHECK_FALSE(c.r2_defined);
  CHECK(std::isnan(c.r2));

  auto d = one_way_anova(by_division, divs);
  CHECK(d.r2_defined);
  CHECK(d.r2 == doctest::Approx(1.0));
  CHECK(d.ss_within == doctest::Approx(0.0));

  auto missing = constant;
  missing.erase("CIN");
  CHECK_THROWS_AS(one_way_anova(missing, divs), DataError);
  auto extra = constant;
  extra["MON"] = 1.0;
  CHECK_THROWS_AS(one_way_anova(extra, divs), DataError);
  auto alias = constant;
  alias.erase("ANA");
  alias["LAA"] = 0.25;
  CHECK_NOTHROW(one_way_anova(alias, divs));
}

TEST_CASE("printed LR table reproduces the published LR decomposition") {
  std::map<std::string, double> a;
  for (const auto& [p, v] : kPrintedLR) a[p] = v.first - v.second;
  auto r = one_way_anova(a, default_divisions(), Matchup::LR);
  CHECK(r.ss_division == doctest::Approx(0.0290).epsilon(0.001 / 0.0290));
  CHECK(r.ss_total == doctest::Approx(0.1753).epsilon(0.001 / 0.1753));
  CHECK(r.r2 == doctest::Approx(0.17).epsilon(0.01 / 0.17));

  std::ostringstream out;
  write_anova_csv(out, {r});
  CHECK(out.str().rfind("matchup,ss_division,ss_total,r2\nLR,", 0) == 0);
}
