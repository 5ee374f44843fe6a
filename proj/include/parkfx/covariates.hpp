#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "parkfx/common.hpp"
#include "parkfx/ingest.hpp"
#include "parkfx/study_config.hpp"

namespace parkfx {

enum class Role : std::uint8_t { batter, pitcher };

struct Tally {
  long long hr = 0;
  long long pa = 0;

  double rate() const noexcept { return pa > 0 ? static_cast<double>(hr) / static_cast<double>(pa) : 0.0; }
  Tally operator-(const Tally& o) const noexcept { return {hr - o.hr, pa - o.pa}; }
  Tally& operator+=(const Tally& o) noexcept {
    hr += o.hr;
    pa += o.pa;
    return *this;
  }
  bool operator==(const Tally&) const = default;
};

/// Per-(player, role, matchup) home-run tallies split by park, so that the
/// "everywhere except park p" rate is two lookups and a subtraction.
class ElsewhereIndex {
 public:
  static ElsewhereIndex build(const std::vector<PlateAppearance>& pas);

  bool contains(std::string_view player, Role role, Matchup m) const;
  Tally total(std::string_view player, Role role, Matchup m) const;
  Tally at_park(std::string_view player, Role role, Matchup m, std::string_view park) const;
  Tally elsewhere(std::string_view player, Role role, Matchup m, std::string_view park) const {
    return total(player, role, m) - at_park(player, role, m, park);
  }

  /// League-wide tallies for a matchup, overall and excluding one park.
  Tally league(Matchup m) const { return league_[index(m)]; }
  Tally league_elsewhere(Matchup m, std::string_view park) const;

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    Tally total;
    std::unordered_map<std::string, Tally> by_park;
  };
  static std::string key(std::string_view player, Role role, Matchup m);
  const Entry* find(std::string_view player, Role role, Matchup m) const;

  std::unordered_map<std::string, Entry> entries_;
  std::array<Tally, 4> league_{};
  std::array<std::unordered_map<std::string, Tally>, 4> league_by_park_;
};

/// Elsewhere HR/PA rate for a player in a matchup, excluding `park`. Falls
/// back to the configured rate when the player has fewer than
/// `min_elsewhere_pa` PAs elsewhere; an id absent from the index is an error
/// under the strict policy and otherwise takes the fallback.
double elsewhere_rate(const ElsewhereIndex& index, std::string_view player, Role role, Matchup m,
                      std::string_view park, const StudyConfig& config);

/// One row of the model's data frame: all PAs of one matchup in one game.
struct GameMatchupObservation {
  std::string game_id;
  int season = 0;
  std::string park;
  Matchup matchup = Matchup::RR;
  long long hrsum = 0;
  double zb = 0.0;
  double zp = 0.0;
  long long pa = 0;

  bool operator==(const GameMatchupObservation&) const = default;
};

/// Aggregate PAs to game x matchup rows, sorted by game id then matchup.
/// zB/zP are sums of per-PA elsewhere rates.
std::vector<GameMatchupObservation> build_observations(const std::vector<PlateAppearance>& pas,
                                                       const ElsewhereIndex& index,
                                                       const StudyConfig& config);

struct MatchupFrequencyTable {
  std::array<Tally, 4> cells{};  // LL, LR, RL, RR

  Tally batter_total(Hand h) const;
  Tally pitcher_total(Hand h) const;
  Tally total() const;
  /// Fraction of all PAs falling in the cell.
  double share(Matchup m) const;
};

MatchupFrequencyTable matchup_frequency_table(const std::vector<PlateAppearance>& pas);

// Observation table: GAME_ID,hrsum,zB,zP,park,bh,ph,pa,season
void write_observations_csv(std::ostream& out, const std::vector<GameMatchupObservation>& obs,
                            int digits = 4);
std::vector<GameMatchupObservation> parse_observations_csv(std::string_view text);
std::vector<GameMatchupObservation> read_observations_csv(const std::string& path);

void write_frequency_csv(std::ostream& out, const MatchupFrequencyTable& table);

}  // namespace parkfx
