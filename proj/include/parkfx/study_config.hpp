#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace parkfx {

/// What to do with a player id that has no roster entry / no index entry.
enum class UnknownPlayerPolicy { strict, skip };

/// Rate used when a player has too few plate appearances away from a park.
enum class FallbackRatePolicy { league_matchup_mean, zero };

struct StudyConfig {
  std::set<int> seasons;
  std::vector<std::string> parks;
  FallbackRatePolicy fallback_rate_policy = FallbackRatePolicy::league_matchup_mean;
  long long min_elsewhere_pa = 1;
  UnknownPlayerPolicy unknown_player = UnknownPlayerPolicy::strict;

  /// 2010-2023 without 2020, the 30 current parks.
  static StudyConfig standard();

  /// Throws UsageError unless seasons is nonempty and parks holds 30 distinct codes.
  void validate() const;
};

}  // namespace parkfx
