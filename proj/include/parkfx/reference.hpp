#pragma once

// Published MLB 2010-2023 (excluding 2020) estimates and summaries. These
// seed the simulator defaults, the division map, and golden tests.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "parkfx/common.hpp"

namespace parkfx::reference {

inline constexpr double kIntercept = -1.3671;
inline constexpr double kBatterSlope = 1.0127;
inline constexpr double kPitcherSlope = 0.3841;

/// Yankee Stadium LR effect quoted to four decimals (the table rounds to 0.18).
inline constexpr double kYankeeStadiumLR = 0.1787;

/// Park x matchup log-scale effects (LL, LR, RL, RR), reference WAS/RR = 0.
const std::map<std::string, std::array<double, 4>>& park_effects();

struct MatchupAverage {
  double pa_per_game;
  double zb;
  double zp;
};
/// League-wide matchup averages (LL, LR, RL, RR).
const std::array<MatchupAverage, 4>& matchup_averages();

/// Marginal adjusted means by park, as printed with cluster labels.
struct MarginalRow {
  std::string park;
  int cluster;
  double lambda;
};
const std::vector<MarginalRow>& marginal_means();

/// Division label per park.
const std::map<std::string, std::string>& divisions();

/// League PA and HR counts per matchup (LL, LR, RL, RR).
struct MatchupCounts {
  long long pa;
  long long hr;
};
const std::array<MatchupCounts, 4>& matchup_counts();

/// Observed HR-count frequencies for the 3132 game-matchups whose fitted
/// mean rounds to 1.4, k = 0..7.
const std::vector<long long>& poissonness_counts_lambda_1_4();

}  // namespace parkfx::reference
