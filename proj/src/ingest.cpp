#include "parkfx/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <future>
#include <ostream>
#include <regex>
#include <sstream>
#include <unordered_map>

#include <fmt/core.h>

namespace parkfx {

StudyConfig StudyConfig::standard() {
  StudyConfig c;
  for (int y = 2010; y <= 2023; ++y)
    if (y != 2020) c.seasons.insert(y);
  c.parks = canonical_parks();
  return c;
}

void StudyConfig::validate() const {
  if (seasons.empty()) throw UsageError("study config: no seasons");
  std::set<std::string> distinct(parks.begin(), parks.end());
  if (parks.size() != 30 || distinct.size() != 30)
    throw UsageError(fmt::format("study config: expected 30 distinct parks, got {}", parks.size()));
  if (min_elsewhere_pa < 0) throw UsageError("study config: min_elsewhere_pa must be >= 0");
}

// ---------------------------------------------------------------- rosters

void Roster::add(RosterEntry entry) {
  auto& slot = entries_[entry.player_id];
  slot.push_back(std::move(entry));
  ++count_;
}

const RosterEntry* Roster::find(std::string_view player_id, int season) const {
  auto it = entries_.find(player_id);
  if (it == entries_.end() || it->second.empty()) return nullptr;
  for (const auto& e : it->second)
    if (e.season == season) return &e;
  return &it->second.front();
}

namespace {

RosterHand parse_roster_hand(std::string_view s, std::string_view what, std::size_t line) {
  if (s == "L") return RosterHand::L;
  if (s == "R") return RosterHand::R;
  if (s == "B") return RosterHand::B;
  throw DataError(fmt::format("roster line {}: invalid {} hand '{}'", line, what, s));
}

// Splits a record, honouring double quotes (names and comments may hold commas).
std::vector<std::string_view> split_record(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i <= line.size()) {
    if (i < line.size() && line[i] == '"') {
      auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) close = line.size();
      out.push_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
      if (i < line.size() && line[i] == ',') ++i;
      else if (i >= line.size()) break;
      continue;
    }
    auto comma = line.find(',', i);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(i));
      break;
    }
    out.push_back(line.substr(i, comma - i));
    i = comma + 1;
    if (i == line.size()) {
      out.emplace_back();
      break;
    }
  }
  return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

std::vector<RosterEntry> parse_roster_file(std::string_view text, int season) {
  std::vector<RosterEntry> out;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (line.empty()) return;
    auto f = split_record(line);
    if (f.size() < 6)
      throw DataError(fmt::format("roster line {}: expected at least 6 fields, got {}", n, f.size()));
    RosterEntry e;
    e.player_id = std::string(f[0]);
    e.bats = parse_roster_hand(f[3], "batting", n);
    e.throws = parse_roster_hand(f[4], "throwing", n);
    e.team = std::string(f[5]);
    e.season = season;
    if (e.player_id.empty()) throw DataError(fmt::format("roster line {}: empty player id", n));
    out.push_back(std::move(e));
  });
  return out;
}

// ---------------------------------------------------------------- event codes

namespace {

std::string_view leading_alpha(std::string_view event) {
  std::size_t n = 0;
  while (n < event.size() && std::isalpha(static_cast<unsigned char>(event[n]))) ++n;
  return event.substr(0, n);
}

std::string_view primary_token(std::string_view event) {
  auto end = event.find_first_of("/.+#!?;");
  return event.substr(0, end);
}

}  // namespace

bool is_no_pa_event(std::string_view event) {
  static constexpr std::array<std::string_view, 11> no_pa{
      "NP", "BK", "CS", "DI", "OA", "PB", "PO", "POCS", "SB", "WP", "FLE"};
  auto code = leading_alpha(event);
  return std::find(no_pa.begin(), no_pa.end(), code) != no_pa.end();
}

bool is_home_run_event(std::string_view event) {
  auto tok = primary_token(event);
  std::size_t n = 0;
  if (tok.substr(0, 2) == "HR") n = 2;
  else if (tok.substr(0, 1) == "H") n = 1;
  else return false;
  for (std::size_t i = n; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
  return true;
}

std::string_view park_for_site(std::string_view site) {
  // Home venues of the 30 franchises over 2010-2023. Joe Robbie Stadium
  // (MIA01), neutral and temporary sites are deliberately absent.
  static const std::unordered_map<std::string_view, std::string_view> table{
      {"ANA01", "ANA"}, {"PHO01", "ARI"}, {"ATL02", "ATL"}, {"ATL03", "ATL"},
      {"BAL12", "BAL"}, {"BOS07", "BOS"}, {"CHI12", "CHA"}, {"CHI11", "CHN"},
      {"CIN09", "CIN"}, {"CLE08", "CLE"}, {"DEN02", "COL"}, {"DET05", "DET"},
      {"HOU03", "HOU"}, {"KAN06", "KCA"}, {"LOS03", "LAN"}, {"MIA02", "MIA"},
      {"MIL06", "MIL"}, {"MIN04", "MIN"}, {"NYC21", "NYA"}, {"NYC20", "NYN"},
      {"OAK01", "OAK"}, {"PHI13", "PHI"}, {"PIT08", "PIT"}, {"SAN02", "SDN"},
      {"SEA03", "SEA"}, {"SFO03", "SFN"}, {"STL10", "SLN"}, {"STP01", "TBA"},
      {"ARL02", "TEX"}, {"ARL03", "TEX"}, {"TOR02", "TOR"}, {"WAS11", "WAS"},
  };
  auto it = table.find(site);
  return it == table.end() ? std::string_view{} : it->second;
}

// ---------------------------------------------------------------- event files

namespace {

class EventParser {
 public:
  EventParser(const Roster& rosters, const ParseOptions& opts) : rosters_(rosters), opts_(opts) {}

  ParseResult run(std::string_view text) {
    for_each_line(text, [&](std::string_view line, std::size_t n) { record(line, n); });
    finish_game();
    return std::move(result_);
  }

 private:
  struct GameState {
    ParsedGame game;
    std::array<std::string, 2> pitcher;  // current pitcher by team (0 visitor, 1 home)
    std::unordered_map<std::string, Hand> badj;
    std::unordered_map<std::string, Hand> padj;
    int play_count = 0;
    std::size_t id_line = 0;
  };

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw DataError(fmt::format("{}:{}: {}", opts_.source_name, line, msg));
  }

  void require_fields(const std::vector<std::string_view>& f, std::size_t n, std::size_t line) {
    if (f.size() < n)
      fail(line, fmt::format("'{}' record needs {} fields, got {}", f[0], n, f.size()));
  }

  int team_field(std::string_view s, std::size_t line) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    fail(line, fmt::format("invalid team flag '{}'", s));
  }

  void record(std::string_view line, std::size_t n) {
    if (line.empty()) return;
    auto f = split_record(line);
    auto kw = f[0];
    if (kw == "version" || kw == "com" || kw == "data" || kw == "ladj" || kw == "radj" ||
        kw == "presadj")
      return;
    if (kw == "id") {
      require_fields(f, 2, n);
      start_game(f[1], n);
      return;
    }
    if (kw != "info" && kw != "start" && kw != "sub" && kw != "play" && kw != "badj" &&
        kw != "padj")
      fail(n, fmt::format("unknown record type '{}'", kw));
    if (!game_) fail(n, fmt::format("'{}' record before any 'id' record", kw));
    if (kw == "info") info(f, n);
    else if (kw == "start" || kw == "sub") lineup(f, n);
    else if (kw == "play") play(f, n);
    else {
      require_fields(f, 3, n);
      Hand h;
      try {
        h = parse_hand(f[2]);
      } catch (const DataError&) {
        fail(n, fmt::format("invalid hand '{}' in {}", f[2], kw));
      }
      (kw == "badj" ? game_->badj : game_->padj)[std::string(f[1])] = h;
    }
  }

  void start_game(std::string_view id, std::size_t n) {
    finish_game();
    if (id.size() != 12)
      fail(n, fmt::format("game id '{}' must be 12 characters (TTTYYYYMMDDn)", id));
    for (std::size_t i = 3; i < 12; ++i)
      if (!std::isdigit(static_cast<unsigned char>(id[i])))
        fail(n, fmt::format("game id '{}' has a non-digit date/number part", id));
    game_.emplace();
    game_->id_line = n;
    auto& h = game_->game.header;
    h.game_id = std::string(id);
    h.home_team = std::string(id.substr(0, 3));
    h.date = fmt::format("{}-{}-{}", id.substr(3, 4), id.substr(7, 2), id.substr(9, 2));
  }

  void info(const std::vector<std::string_view>& f, std::size_t n) {
    require_fields(f, 2, n);
    auto key = f[1];
    auto value = f.size() > 2 ? f[2] : std::string_view{};
    auto& h = game_->game.header;
    if (key == "site") {
      h.site = std::string(value);
    } else if (key == "hometeam") {
      if (value != std::string_view(h.game_id).substr(0, 3))
        fail(n, fmt::format("hometeam '{}' does not match game id '{}'", value, h.game_id));
      h.home_team = std::string(value);
    } else if (key == "visteam") {
      h.visiting_team = std::string(value);
    } else if (key == "date") {
      // yyyy/mm/dd
      if (value.size() != 10 || value[4] != '/' || value[7] != '/')
        fail(n, fmt::format("invalid date '{}'", value));
      auto iso = fmt::format("{}-{}-{}", value.substr(0, 4), value.substr(5, 2), value.substr(8, 2));
      if (iso != h.date)
        fail(n, fmt::format("date {} is inconsistent with game id '{}'", value, h.game_id));
    }
  }

  void lineup(const std::vector<std::string_view>& f, std::size_t n) {
    require_fields(f, 6, n);
    int team = team_field(f[3], n);
    long long pos = 0;
    try {
      pos = parse_int(f[5]);
    } catch (const DataError&) {
      fail(n, fmt::format("invalid fielding position '{}'", f[5]));
    }
    if (pos == 1) game_->pitcher[static_cast<std::size_t>(team)] = std::string(f[1]);
  }

  void play(const std::vector<std::string_view>& f, std::size_t n) {
    require_fields(f, 7, n);
    try {
      parse_int(f[1]);
    } catch (const DataError&) {
      fail(n, fmt::format("invalid inning '{}'", f[1]));
    }
    int batting = team_field(f[2], n);
    auto event = f[6];
    if (event.empty()) fail(n, "empty event field");
    int seq = ++game_->play_count;
    if (is_no_pa_event(event)) return;

    bool hr = is_home_run_event(event);
    (batting == 1 ? game_->game.home_hr : game_->game.visitor_hr) += hr ? 1 : 0;

    std::string batter(f[3]);
    const auto& pitcher = game_->pitcher[static_cast<std::size_t>(1 - batting)];
    if (pitcher.empty()) fail(n, "no pitcher recorded for the fielding team");

    int season = season_of(game_->game.header.game_id);
    const RosterEntry* b = rosters_.find(batter, season);
    const RosterEntry* p = rosters_.find(pitcher, season);
    for (auto [entry, id] : {std::pair<const RosterEntry*, const std::string*>{b, &batter},
                              std::pair<const RosterEntry*, const std::string*>{p, &pitcher}}) {
      if (entry) continue;
      if (opts_.unknown_player == UnknownPlayerPolicy::strict)
        fail(n, fmt::format("unknown player id '{}'", *id));
      result_.warnings.push_back(
          fmt::format("{}:{}: skipped PA with unknown player id '{}'", opts_.source_name, n, *id));
      ++result_.skipped_pas;
      return;
    }

    Hand ph;
    if (auto it = game_->padj.find(pitcher); it != game_->padj.end()) {
      ph = it->second;
      game_->padj.erase(it);
    } else if (p->throws == RosterHand::B) {
      fail(n, fmt::format("pitcher '{}' throws with both hands and no padj record precedes the PA",
                          pitcher));
    } else {
      ph = p->throws == RosterHand::L ? Hand::L : Hand::R;
    }

    Hand bh;
    if (auto it = game_->badj.find(batter); it != game_->badj.end()) {
      bh = it->second;
      game_->badj.erase(it);
    } else if (b->bats == RosterHand::B) {
      bh = ph == Hand::L ? Hand::R : Hand::L;
    } else {
      bh = b->bats == RosterHand::L ? Hand::L : Hand::R;
    }

    PlateAppearance pa;
    pa.game_id = game_->game.header.game_id;
    pa.season = season;
    pa.batter_id = std::move(batter);
    pa.pitcher_id = pitcher;
    pa.batter_hand = bh;
    pa.pitcher_hand = ph;
    pa.is_home_run = hr;
    pa.event_seq = seq;
    game_->game.pas.push_back(std::move(pa));
  }

  static int season_of(std::string_view game_id) {
    return static_cast<int>(parse_int(game_id.substr(3, 4)));
  }

  void finish_game() {
    if (!game_) return;
    auto& g = game_->game;
    std::string park;
    if (!g.header.site.empty()) {
      auto mapped = park_for_site(g.header.site);
      park = mapped.empty() ? g.header.site : std::string(mapped);
    } else {
      park = g.header.home_team;
    }
    int season = season_of(g.header.game_id);
    if (season < 1871 || season > 2100)
      fail(game_->id_line, fmt::format("season {} out of range", season));
    for (auto& pa : g.pas) pa.park = park;
    result_.games.push_back(std::move(g));
    game_.reset();
  }

  const Roster& rosters_;
  const ParseOptions& opts_;
  std::optional<GameState> game_;
  ParseResult result_;
};

}  // namespace

ParseResult parse_event_file(std::string_view text, const Roster& rosters,
                             const ParseOptions& options) {
  return EventParser(rosters, options).run(text);
}

ParseResult parse_event_files(const std::vector<std::string>& paths, const Roster& rosters,
                              UnknownPlayerPolicy policy) {
  std::vector<std::future<ParseResult>> jobs;
  jobs.reserve(paths.size());
  for (const auto& path : paths) {
    jobs.push_back(std::async(std::launch::async, [&rosters, path, policy] {
      ParseOptions opts;
      opts.unknown_player = policy;
      opts.source_name = std::filesystem::path(path).filename().string();
      return parse_event_file(read_text_file(path), rosters, opts);
    }));
  }
  ParseResult merged;
  for (auto& job : jobs) {
    auto r = job.get();
    for (auto& g : r.games) merged.games.push_back(std::move(g));
    for (auto& w : r.warnings) merged.warnings.push_back(std::move(w));
    merged.skipped_pas += r.skipped_pas;
  }
  return merged;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::filesystem::path> sorted_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError(fmt::format("'{}' is not a directory", dir));
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

Roster load_roster_dir(const std::string& dir) {
  static const std::regex name_re(R"(^([A-Z0-9]{3})(\d{4})\.ROS$)");
  Roster roster;
  for (const auto& path : sorted_files(dir)) {
    auto name = upper(path.filename().string());
    if (path.extension().string().size() != 4 || upper(path.extension().string()) != ".ROS")
      continue;
    std::smatch m;
    if (!std::regex_match(name, m, name_re))
      throw DataError(fmt::format("roster file '{}' is not named TTTYYYY.ROS", name));
    int season = static_cast<int>(parse_int(m[2].str()));
    std::vector<RosterEntry> entries;
    try {
      entries = parse_roster_file(read_text_file(path.string()), season);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}: {}", path.filename().string(), e.what()));
    }
    for (auto& e : entries) roster.add(std::move(e));
  }
  return roster;
}

std::vector<std::string> list_event_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& path : sorted_files(dir)) {
    auto ext = upper(path.extension().string());
    if (ext == ".EVN" || ext == ".EVA") out.push_back(path.string());
  }
  return out;
}

std::vector<PlateAppearance> filter_study_window(const std::vector<PlateAppearance>& pas,
                                                 const StudyConfig& config) {
  std::vector<PlateAppearance> out;
  for (const auto& pa : pas) {
    if (!config.seasons.contains(pa.season)) continue;
    if (!find_park(config.parks, pa.park)) continue;
    out.push_back(pa);
  }
  return out;
}

std::vector<PlateAppearance> flatten(const ParseResult& result) {
  std::vector<PlateAppearance> out;
  for (const auto& g : result.games) out.insert(out.end(), g.pas.begin(), g.pas.end());
  return out;
}

void write_pa_csv(std::ostream& out, const std::vector<PlateAppearance>& pas) {
  out << "game_id,season,park,batter_id,pitcher_id,bh,ph,hr,seq\n";
  for (const auto& pa : pas) {
    out << pa.game_id << ',' << pa.season << ',' << pa.park << ',' << pa.batter_id << ','
        << pa.pitcher_id << ',' << to_char(pa.batter_hand) << ',' << to_char(pa.pitcher_hand)
        << ',' << (pa.is_home_run ? 1 : 0) << ',' << pa.event_seq << '\n';
  }
}

std::vector<PlateAppearance> parse_pa_csv(std::string_view text) {
  std::vector<PlateAppearance> out;
  bool header = true;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (line.empty()) return;
    if (header) {
      header = false;
      if (line != "game_id,season,park,batter_id,pitcher_id,bh,ph,hr,seq")
        throw DataError(fmt::format("PA table line {}: unexpected header", n));
      return;
    }
    auto f = split_csv_line(line);
    if (f.size() != 9) throw DataError(fmt::format("PA table line {}: expected 9 fields", n));
    try {
      PlateAppearance pa;
      pa.game_id = f[0];
      pa.season = static_cast<int>(parse_int(f[1]));
      pa.park = f[2];
      pa.batter_id = f[3];
      pa.pitcher_id = f[4];
      pa.batter_hand = parse_hand(f[5]);
      pa.pitcher_hand = parse_hand(f[6]);
      auto hr = parse_int(f[7]);
      if (hr != 0 && hr != 1) throw DataError("hr must be 0 or 1");
      pa.is_home_run = hr == 1;
      pa.event_seq = static_cast<int>(parse_int(f[8]));
      out.push_back(std::move(pa));
    } catch (const DataError& e) {
      throw DataError(fmt::format("PA table line {}: {}", n, e.what()));
    }
  });
  return out;
}

std::vector<PlateAppearance> read_pa_csv(const std::string& path) {
  return parse_pa_csv(read_text_file(path));
}

}  // namespace parkfx
