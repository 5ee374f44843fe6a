#include "parkfx/division_anova.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/core.h>

#include "parkfx/reference.hpp"

namespace parkfx {

const DivisionMap& default_divisions() {
  return reference::divisions();
}

std::string_view division_of(const DivisionMap& divisions, std::string_view park) {
  auto it = divisions.find(std::string(park));
  if (it == divisions.end() && park == "LAA") it = divisions.find("ANA");
  if (it == divisions.end()) throw DataError(fmt::format("park '{}' has no division", park));
  return it->second;
}

void validate_divisions(const DivisionMap& divisions) {
  if (divisions.size() != 30)
    throw UsageError(fmt::format("division map lists {} parks, expected 30", divisions.size()));
  std::map<std::string, int> sizes;
  for (const auto& [park, div] : divisions) sizes[div] += 1;
  if (sizes.size() != 6) throw UsageError(fmt::format("division map has {} divisions, expected 6", sizes.size()));
  for (const auto& [div, n] : sizes)
    if (n != 5) throw UsageError(fmt::format("division '{}' has {} parks, expected 5", div, n));
}

double adjustment_magnitude(const FittedModel& model,
                            const std::vector<GameMatchupObservation>& observations,
                            const MatchupAverages& averages, std::string_view park, Matchup m) {
  double hr = 0.0;
  long long n = 0;
  for (const auto& o : observations)
    if (o.matchup == m && o.park == park) {
      hr += static_cast<double>(o.hrsum);
      ++n;
    }
  if (n == 0)
    throw DataError(fmt::format("park '{}' has no {} observations", park, to_string(m)));
  return adjusted_mean(model, park, m, averages).lambda - hr / static_cast<double>(n);
}

std::map<std::string, double> adjustment_magnitudes(const AdjustedMeansReport& report, Matchup m) {
  std::map<std::string, double> out;
  for (const auto& r : report.by_matchup[index(m)]) {
    if (r.games == 0)
      throw DataError(fmt::format("park '{}' has no {} observations", r.park, to_string(m)));
    out[r.park] = r.lambda - r.hr_per_game;
  }
  return out;
}

AnovaResult one_way_anova(const std::map<std::string, double>& values, const DivisionMap& divisions,
                          Matchup m) {
  std::map<std::string, std::pair<double, int>> groups;
  for (const auto& [park, div] : divisions) {
    auto it = values.find(park);
    if (it == values.end() && park == "ANA") it = values.find("LAA");
    if (it == values.end()) throw DataError(fmt::format("no value for park '{}'", park));
    auto& g = groups[div];
    g.first += it->second;
    g.second += 1;
  }
  for (const auto& kv : values) division_of(divisions, kv.first);

  double grand = 0.0;
  int n = 0;
  for (const auto& [div, g] : groups) {
    grand += g.first;
    n += g.second;
  }
  grand /= n;
  AnovaResult r;
  r.matchup = m;
  for (const auto& [div, g] : groups) {
    double mean = g.first / g.second;
    r.ss_division += g.second * (mean - grand) * (mean - grand);
  }
  for (const auto& [park, div] : divisions) {
    auto it = values.find(park);
    if (it == values.end()) it = values.find("LAA");
    double mean = groups[div].first / groups[div].second;
    double v = it->second;
    r.ss_total += (v - grand) * (v - grand);
    r.ss_within += (v - mean) * (v - mean);
  }
  r.df_division = static_cast<int>(groups.size()) - 1;
  r.df_error = n - static_cast<int>(groups.size());
  r.df_total = n - 1;
  if (r.ss_total > 0.0) {
    r.r2 = r.ss_division / r.ss_total;
  } else {
    r.r2 = std::numeric_limits<double>::quiet_NaN();
    r.r2_defined = false;
  }
  return r;
}

void write_anova_csv(std::ostream& out, const std::vector<AnovaResult>& results) {
  out << "matchup,ss_division,ss_total,r2\n";
  for (const auto& r : results)
    out << fmt::format("{},{:.4f},{:.4f},{}\n", to_string(r.matchup), r.ss_division, r.ss_total,
                       r.r2_defined ? fmt::format("{:.2f}", r.r2) : std::string("NA"));
}

}  // namespace parkfx
