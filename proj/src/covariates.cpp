#include "parkfx/covariates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/core.h>

namespace parkfx {

std::string ElsewhereIndex::key(std::string_view player, Role role, Matchup m) {
  std::string k(player);
  k.push_back('|');
  k.push_back(role == Role::batter ? 'B' : 'P');
  k.append(to_string(m));
  return k;
}

const ElsewhereIndex::Entry* ElsewhereIndex::find(std::string_view player, Role role,
                                                  Matchup m) const {
  auto it = entries_.find(key(player, role, m));
  return it == entries_.end() ? nullptr : &it->second;
}

ElsewhereIndex ElsewhereIndex::build(const std::vector<PlateAppearance>& pas) {
  ElsewhereIndex idx;
  for (const auto& pa : pas) {
    Tally t{pa.is_home_run ? 1 : 0, 1};
    Matchup m = pa.matchup();
    for (auto [player, role] : {std::pair{&pa.batter_id, Role::batter},
                                std::pair{&pa.pitcher_id, Role::pitcher}}) {
      auto& e = idx.entries_[key(*player, role, m)];
      e.total += t;
      e.by_park[pa.park] += t;
    }
    idx.league_[index(m)] += t;
    idx.league_by_park_[index(m)][pa.park] += t;
  }
  return idx;
}

bool ElsewhereIndex::contains(std::string_view player, Role role, Matchup m) const {
  return find(player, role, m) != nullptr;
}

Tally ElsewhereIndex::total(std::string_view player, Role role, Matchup m) const {
  const Entry* e = find(player, role, m);
  return e ? e->total : Tally{};
}

Tally ElsewhereIndex::at_park(std::string_view player, Role role, Matchup m,
                              std::string_view park) const {
  const Entry* e = find(player, role, m);
  if (!e) return {};
  auto it = e->by_park.find(std::string(park));
  return it == e->by_park.end() ? Tally{} : it->second;
}

Tally ElsewhereIndex::league_elsewhere(Matchup m, std::string_view park) const {
  const auto& by_park = league_by_park_[index(m)];
  auto it = by_park.find(std::string(park));
  return league_[index(m)] - (it == by_park.end() ? Tally{} : it->second);
}

double elsewhere_rate(const ElsewhereIndex& index, std::string_view player, Role role, Matchup m,
                      std::string_view park, const StudyConfig& config) {
  if (!index.contains(player, role, m)) {
    // A player can be known in another matchup; only a wholly unknown id is an error.
    bool known = false;
    for (Matchup other : kMatchups) known = known || index.contains(player, role, other);
    if (!known && config.unknown_player == UnknownPlayerPolicy::strict)
      throw DataError(fmt::format("player '{}' has no plate appearances in the index", player));
  }
  Tally e = index.elsewhere(player, role, m, park);
  if (e.pa > 0 && e.pa >= config.min_elsewhere_pa) return e.rate();
  switch (config.fallback_rate_policy) {
    case FallbackRatePolicy::zero:
      return 0.0;
    case FallbackRatePolicy::league_matchup_mean:
      return index.league_elsewhere(m, park).rate();
  }
  return 0.0;
}

std::vector<GameMatchupObservation> build_observations(const std::vector<PlateAppearance>& pas,
                                                       const ElsewhereIndex& elsewhere,
                                                       const StudyConfig& config) {
  std::map<std::pair<std::string, int>, GameMatchupObservation> groups;
  for (const auto& pa : pas) {
    Matchup m = pa.matchup();
    auto [it, inserted] = groups.try_emplace({pa.game_id, static_cast<int>(index(m))});
    auto& obs = it->second;
    if (inserted) {
      obs.game_id = pa.game_id;
      obs.season = pa.season;
      obs.park = pa.park;
      obs.matchup = m;
    } else if (obs.park != pa.park || obs.season != pa.season) {
      throw DataError(fmt::format("game '{}' has PAs in more than one park/season", pa.game_id));
    }
    obs.hrsum += pa.is_home_run ? 1 : 0;
    obs.pa += 1;
    obs.zb += elsewhere_rate(elsewhere, pa.batter_id, Role::batter, m, pa.park, config);
    obs.zp += elsewhere_rate(elsewhere, pa.pitcher_id, Role::pitcher, m, pa.park, config);
  }
  std::vector<GameMatchupObservation> out;
  out.reserve(groups.size());
  for (auto& [k, obs] : groups) out.push_back(std::move(obs));
  return out;
}

Tally MatchupFrequencyTable::batter_total(Hand h) const {
  Tally t;
  for (Matchup m : kMatchups)
    if (parkfx::batter_hand(m) == h) t += cells[index(m)];
  return t;
}

Tally MatchupFrequencyTable::pitcher_total(Hand h) const {
  Tally t;
  for (Matchup m : kMatchups)
    if (parkfx::pitcher_hand(m) == h) t += cells[index(m)];
  return t;
}

Tally MatchupFrequencyTable::total() const {
  Tally t;
  for (const auto& c : cells) t += c;
  return t;
}

double MatchupFrequencyTable::share(Matchup m) const {
  auto n = total().pa;
  return n > 0 ? static_cast<double>(cells[index(m)].pa) / static_cast<double>(n) : 0.0;
}

MatchupFrequencyTable matchup_frequency_table(const std::vector<PlateAppearance>& pas) {
  MatchupFrequencyTable t;
  for (const auto& pa : pas) t.cells[index(pa.matchup())] += Tally{pa.is_home_run ? 1 : 0, 1};
  return t;
}

void write_observations_csv(std::ostream& out, const std::vector<GameMatchupObservation>& obs,
                            int digits) {
  out << "GAME_ID,hrsum,zB,zP,park,bh,ph,pa,season\n";
  for (const auto& o : obs) {
    out << fmt::format("{},{},{:.{}f},{:.{}f},{},{},{},{},{}\n", o.game_id, o.hrsum, o.zb, digits,
                       o.zp, digits, o.park, to_char(batter_hand(o.matchup)),
                       to_char(pitcher_hand(o.matchup)), o.pa, o.season);
  }
}

std::vector<GameMatchupObservation> parse_observations_csv(std::string_view text) {
  std::vector<GameMatchupObservation> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (n == 1) {
      if (line != "GAME_ID,hrsum,zB,zP,park,bh,ph,pa,season")
        throw DataError("observation table: unexpected header");
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 9) throw DataError(fmt::format("observation table line {}: expected 9 fields", n));
    try {
      GameMatchupObservation o;
      o.game_id = f[0];
      o.hrsum = parse_int(f[1]);
      o.zb = parse_double(f[2]);
      o.zp = parse_double(f[3]);
      o.park = f[4];
      o.matchup = make_matchup(parse_hand(f[5]), parse_hand(f[6]));
      o.pa = parse_int(f[7]);
      o.season = static_cast<int>(parse_int(f[8]));
      if (o.hrsum < 0 || o.pa < 0 || o.hrsum > o.pa) throw DataError("need 0 <= hrsum <= pa");
      if (!(o.zb >= 0.0) || !(o.zp >= 0.0) || !std::isfinite(o.zb) || !std::isfinite(o.zp))
        throw DataError("zB and zP must be finite and nonnegative");
      out.push_back(std::move(o));
    } catch (const DataError& e) {
      throw DataError(fmt::format("observation table line {}: {}", n, e.what()));
    }
  }
  return out;
}

std::vector<GameMatchupObservation> read_observations_csv(const std::string& path) {
  return parse_observations_csv(read_text_file(path));
}

void write_frequency_csv(std::ostream& out, const MatchupFrequencyTable& t) {
  out << "batter,pitcher,pa,hr,rate,share\n";
  auto row = [&](std::string_view b, std::string_view p, const Tally& c, double share) {
    out << fmt::format("{},{},{},{},{:.4f},{:.4f}\n", b, p, c.pa, c.hr, c.rate(), share);
  };
  auto total = static_cast<double>(std::max<long long>(t.total().pa, 1));
  for (Matchup m : kMatchups)
    row(std::string(1, to_char(batter_hand(m))), std::string(1, to_char(pitcher_hand(m))),
        t.cells[index(m)], t.share(m));
  for (Hand h : {Hand::L, Hand::R})
    row(std::string(1, to_char(h)), "*", t.batter_total(h),
        static_cast<double>(t.batter_total(h).pa) / total);
  for (Hand h : {Hand::L, Hand::R})
    row("*", std::string(1, to_char(h)), t.pitcher_total(h),
        static_cast<double>(t.pitcher_total(h).pa) / total);
  row("*", "*", t.total(), t.total().pa > 0 ? 1.0 : 0.0);
}

}  // namespace parkfx
