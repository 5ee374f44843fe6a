#pragma once

// Retrosheet event/roster ingestion. Only plate-appearance boundaries,
// handedness and home runs are tracked; base-running and fielding detail
// in the event strings is ignored.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parkfx/common.hpp"
#include "parkfx/study_config.hpp"

namespace parkfx {

/// Roster handedness; `B` is a switch-hitter (or an ambidextrous pitcher).
enum class RosterHand : std::uint8_t { L, R, B };

struct RosterEntry {
  std::string player_id;
  RosterHand bats = RosterHand::R;
  RosterHand throws = RosterHand::R;
  std::string team;
  int season = 0;
};

/// Player lookup across roster files. A player may appear on several
/// rosters; lookups prefer the entry for the requested season.
class Roster {
 public:
  void add(RosterEntry entry);
  const RosterEntry* find(std::string_view player_id, int season) const;
  std::size_t size() const noexcept { return count_; }

 private:
  std::map<std::string, std::vector<RosterEntry>, std::less<>> entries_;
  std::size_t count_ = 0;
};

/// Parse one `.ROS` file (`id,last,first,bats,throws,team,pos`).
std::vector<RosterEntry> parse_roster_file(std::string_view text, int season);

struct GameHeader {
  std::string game_id;
  std::string site;  // raw `info,site` code, may be empty
  std::string date;  // ISO yyyy-mm-dd
  std::string home_team;
  std::string visiting_team;
};

struct PlateAppearance {
  std::string game_id;
  int season = 0;
  std::string park;
  std::string batter_id;
  std::string pitcher_id;
  Hand batter_hand = Hand::R;
  Hand pitcher_hand = Hand::R;
  bool is_home_run = false;
  int event_seq = 0;  // 1-based index of the `play` record within its game

  Matchup matchup() const noexcept { return make_matchup(batter_hand, pitcher_hand); }
  bool operator==(const PlateAppearance&) const = default;
};

struct ParsedGame {
  GameHeader header;
  std::vector<PlateAppearance> pas;
  int home_hr = 0;     // home runs hit by the home team
  int visitor_hr = 0;  // home runs hit by the visitors
};

struct ParseOptions {
  UnknownPlayerPolicy unknown_player = UnknownPlayerPolicy::strict;
  std::string source_name = "<input>";  // used in error messages
};

struct ParseResult {
  std::vector<ParsedGame> games;
  std::vector<std::string> warnings;
  std::size_t skipped_pas = 0;
};

/// Event codes that do not complete a plate appearance.
bool is_no_pa_event(std::string_view event);
/// True for `HR`/`H` primary tokens, optionally followed by a fielder digit.
bool is_home_run_event(std::string_view event);

/// Map a Retrosheet site code to the home-team code used as park identity.
/// Returns empty for neutral or retired sites.
std::string_view park_for_site(std::string_view site);

/// Throws DataError (with source and line) on malformed input or, under the
/// strict policy, on an unknown player id.
ParseResult parse_event_file(std::string_view text, const Roster& rosters,
                             const ParseOptions& options = {});

/// Merge several files, parsed independently; output order follows `paths`.
ParseResult parse_event_files(const std::vector<std::string>& paths, const Roster& rosters,
                              UnknownPlayerPolicy policy);

/// Load every `*.ROS` file in a directory; team and season come from the
/// `TTTYYYY.ROS` file name.
Roster load_roster_dir(const std::string& dir);

/// Event files (`.EVN`, `.EVA`, case-insensitive) in a directory, sorted by name.
std::vector<std::string> list_event_files(const std::string& dir);

/// Keep PAs whose season and park belong to the study; order preserved.
std::vector<PlateAppearance> filter_study_window(const std::vector<PlateAppearance>& pas,
                                                 const StudyConfig& config);

std::vector<PlateAppearance> flatten(const ParseResult& result);

// Canonical PA table: game_id,season,park,batter_id,pitcher_id,bh,ph,hr,seq
void write_pa_csv(std::ostream& out, const std::vector<PlateAppearance>& pas);
std::vector<PlateAppearance> read_pa_csv(const std::string& path);
std::vector<PlateAppearance> parse_pa_csv(std::string_view text);

}  // namespace parkfx
