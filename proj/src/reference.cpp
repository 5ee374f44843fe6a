#include "parkfx/reference.hpp"

namespace parkfx::reference {

const std::map<std::string, std::array<double, 4>>& park_effects() {
  static const std::map<std::string, std::array<double, 4>> table{
      {"SFN", {-1.05, -0.45, -0.35, -0.34}}, {"MIA", {-1.09, -0.33, -0.37, -0.40}},
      {"PIT", {-1.19, -0.14, -0.47, -0.39}}, {"OAK", {-0.81, -0.30, -0.32, -0.33}},
      {"SLN", {-1.13, -0.19, -0.27, -0.36}}, {"KCA", {-1.05, -0.23, -0.31, -0.27}},
      {"CLE", {-0.97, -0.11, -0.40, -0.18}}, {"BOS", {-0.76, -0.27, -0.17, -0.16}},
      {"SDN", {-1.03, -0.23, -0.23, -0.11}}, {"DET", {-1.03, -0.16, -0.20, -0.19}},
      {"TBA", {-0.81, -0.17, -0.26, -0.18}}, {"MIN", {-1.05, -0.20, -0.17, -0.15}},
      {"ATL", {-0.91, -0.13, -0.29, -0.15}}, {"NYN", {-0.85, -0.10, -0.23, -0.16}},
      {"SEA", {-0.59, -0.16, -0.18, -0.16}}, {"ANA", {-0.66, -0.08, -0.25, -0.15}},
      {"HOU", {-0.77, -0.10, -0.18, -0.11}}, {"CHN", {-0.84, -0.16, -0.13, -0.05}},
      {"ARI", {-0.86, -0.07, -0.12, -0.08}}, {"WAS", {-0.88, -0.06, -0.25, 0.00}},
      {"TOR", {-0.70, 0.00, -0.07, -0.07}},  {"CHA", {-0.98, 0.05, -0.09, 0.04}},
      {"LAN", {-0.50, 0.01, -0.13, 0.02}},   {"TEX", {-0.38, 0.04, -0.15, 0.01}},
      {"MIL", {-0.72, 0.12, -0.06, 0.03}},   {"BAL", {-0.67, 0.16, -0.13, 0.02}},
      {"PHI", {-0.60, 0.09, -0.08, 0.08}},   {"NYA", {-0.52, 0.18, -0.15, 0.00}},
      {"COL", {-0.39, 0.08, 0.00, 0.11}},    {"CIN", {-0.62, 0.24, -0.04, 0.14}},
  };
  return table;
}

const std::array<MatchupAverage, 4>& matchup_averages() {
  static const std::array<MatchupAverage, 4> avg{{
      {6.6, 0.14, 0.15},
      {25.8, 0.75, 0.76},
      {16.3, 0.50, 0.50},
      {29.1, 0.84, 0.86},
  }};
  return avg;
}

const std::vector<MarginalRow>& marginal_means() {
  static const std::vector<MarginalRow> rows{
      {"SFN", 1, 1.53}, {"MIA", 1, 1.54}, {"PIT", 1, 1.62}, {"OAK", 1, 1.65},
      {"SLN", 1, 1.68}, {"KCA", 1, 1.70}, {"CLE", 2, 1.82}, {"BOS", 2, 1.84},
      {"SDN", 2, 1.84}, {"DET", 2, 1.84}, {"TBA", 2, 1.85}, {"MIN", 2, 1.85},
      {"ATL", 2, 1.87}, {"NYN", 2, 1.91}, {"SEA", 2, 1.93}, {"ANA", 2, 1.95},
      {"HOU", 2, 1.97}, {"CHN", 2, 2.00}, {"ARI", 2, 2.04}, {"WAS", 2, 2.05},
      {"TOR", 3, 2.14}, {"CHA", 3, 2.22}, {"LAN", 3, 2.23}, {"TEX", 3, 2.25},
      {"MIL", 3, 2.31}, {"BAL", 3, 2.32}, {"PHI", 3, 2.34}, {"NYA", 3, 2.34},
      {"COL", 4, 2.45}, {"CIN", 5, 2.55},
  };
  return rows;
}

const std::map<std::string, std::string>& divisions() {
  static const std::map<std::string, std::string> map{
      {"ARI", "NL-West"},    {"COL", "NL-West"},    {"LAN", "NL-West"},
      {"SDN", "NL-West"},    {"SFN", "NL-West"},    {"CHN", "NL-Central"},
      {"CIN", "NL-Central"}, {"MIL", "NL-Central"}, {"PIT", "NL-Central"},
      {"SLN", "NL-Central"}, {"ATL", "NL-East"},    {"MIA", "NL-East"},
      {"NYN", "NL-East"},    {"PHI", "NL-East"},    {"WAS", "NL-East"},
      {"HOU", "AL-West"},    {"ANA", "AL-West"},    {"OAK", "AL-West"},
      {"SEA", "AL-West"},    {"TEX", "AL-West"},    {"DET", "AL-Central"},
      {"CHA", "AL-Central"}, {"CLE", "AL-Central"}, {"KCA", "AL-Central"},
      {"MIN", "AL-Central"}, {"BAL", "AL-East"},    {"BOS", "AL-East"},
      {"NYA", "AL-East"},    {"TBA", "AL-East"},    {"TOR", "AL-East"},
  };
  return map;
}

const std::array<MatchupCounts, 4>& matchup_counts() {
  static const std::array<MatchupCounts, 4> counts{{
      {193626, 4267},
      {834352, 24418},
      {483065, 14837},
      {940062, 27472},
  }};
  return counts;
}

const std::vector<long long>& poissonness_counts_lambda_1_4() {
  static const std::vector<long long> counts{816, 1115, 704, 331, 131, 24, 10, 1};
  return counts;
}

}  // namespace parkfx::reference
