#include <doctest.h>

#include <sstream>
#include <string>

#include "parkfx/common.hpp"
#include "parkfx/ingest.hpp"
#include "parkfx/park_effects.hpp"

using namespace parkfx;

namespace {

const std::string kData = PARKFX_TEST_DATA;

Roster tiny_roster() {
  Roster r;
  r.add({"bat1", RosterHand::L, RosterHand::L, "AAA", 2015});
  r.add({"bat2", RosterHand::B, RosterHand::R, "AAA", 2015});
  r.add({"pit1", RosterHand::R, RosterHand::R, "BBB", 2015});
  r.add({"pit2", RosterHand::L, RosterHand::B, "BBB", 2015});
  return r;
}

std::string game_text(const std::string& plays) {
  return "id,NYA201504100\n"
         "info,visteam,BOS\ninfo,hometeam,NYA\ninfo,site,NYC21\ninfo,date,2015/04/10\n"
         "start,bat1,\"x\",0,1,7\nstart,bat2,\"x\",0,2,6\nstart,pit1,\"x\",1,0,1\n" +
         plays;
}

}  // namespace

TEST_CASE("shipped three-game corpus yields the hand-enumerated PA table") {
  auto roster = load_roster_dir(kData + "/rosters");
  CHECK(roster.size() == 14);
  auto files = list_event_files(kData + "/events");
  REQUIRE(files.size() == 3);
  auto parsed = parse_event_files(files, roster, UnknownPlayerPolicy::strict);
  CHECK(parsed.skipped_pas == 0);

  std::ostringstream out;
  write_pa_csv(out, flatten(parsed));
  CHECK(out.str() == read_text_file(kData + "/expected_pa.csv"));

  auto games = game_lines(parsed);
  REQUIRE(games.size() == 3);
  CHECK(games[2] == GameLine{"NYA201504100", 2015, "NYA", "NYA", "BOS", 2, 4});
}

TEST_CASE("PA table round-trips through its CSV form") {
  auto expected = read_text_file(kData + "/expected_pa.csv");
  auto pas = parse_pa_csv(expected);
  CHECK(pas.size() == 25);
  std::ostringstream out;
  write_pa_csv(out, pas);
  CHECK(out.str() == expected);
}

TEST_CASE("event classification") {
  for (auto e : {"NP", "WP", "PB", "BK", "DI", "OA", "SB2", "CS2(26)", "PO1(13)", "POCS2(1361)", "FLE7"})
    CHECK_MESSAGE(is_no_pa_event(e), e);
  for (auto e : {"K", "W", "IW", "HP", "S8/L", "K+WP", "HR/F7", "63/G", "DGR"})
    CHECK_MESSAGE(!is_no_pa_event(e), e);

  for (auto e : {"HR", "HR9", "H9/L", "HR/F78", "H", "HR.1-H;2-H"}) CHECK_MESSAGE(is_home_run_event(e), e);
  for (auto e : {"HP", "S7", "DGR/L9", "K", "H9X"}) CHECK_MESSAGE(!is_home_run_event(e), e);
}

TEST_CASE("site codes map to the home team") {
  CHECK(park_for_site("NYC21") == "NYA");
  CHECK(park_for_site("BOS07") == "BOS");
  CHECK(park_for_site("CLE08") == "CLE");
  CHECK(park_for_site("XXX99").empty());
}

TEST_CASE("switch-hitter bats opposite the pitcher") {
  auto r = parse_event_file(game_text("play,1,0,bat2,00,X,S8\n"), tiny_roster());
  REQUIRE(r.games.size() == 1);
  REQUIRE(r.games[0].pas.size() == 1);
  CHECK(r.games[0].pas[0].batter_hand == Hand::L);
  CHECK(r.games[0].pas[0].pitcher_hand == Hand::R);
}

TEST_CASE("badj applies to one PA only") {
  auto r = parse_event_file(
      game_text("badj,bat1,R\nplay,1,0,bat1,00,X,S8\nplay,1,0,bat2,00,X,K\nplay,2,0,bat1,00,X,K\n"),
      tiny_roster());
  auto& pas = r.games[0].pas;
  REQUIRE(pas.size() == 3);
  CHECK(pas[0].batter_hand == Hand::R);
  CHECK(pas[2].batter_hand == Hand::L);
}

TEST_CASE("ambidextrous pitcher needs padj") {
  std::string base =
      "id,NYA201504100\ninfo,visteam,BOS\ninfo,hometeam,NYA\ninfo,site,NYC21\n"
      "start,bat1,\"x\",0,1,7\nstart,pit2,\"x\",1,0,1\n";
  CHECK_THROWS_AS(parse_event_file(base + "play,1,0,bat1,00,X,K\n", tiny_roster()), DataError);
  auto r = parse_event_file(base + "padj,pit2,L\nplay,1,0,bat1,00,X,K\n", tiny_roster());
  CHECK(r.games[0].pas[0].pitcher_hand == Hand::L);
}

TEST_CASE("unknown players: strict fails with a location, skip counts them") {
  auto text = game_text("play,1,0,ghost,00,X,HR\nplay,1,0,bat1,00,X,K\n");
  ParseOptions strict;
  strict.source_name = "g.EVA";
  try {
    parse_event_file(text, tiny_roster(), strict);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("g.EVA:") == 0);
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
  ParseOptions skip;
  skip.unknown_player = UnknownPlayerPolicy::skip;
  auto r = parse_event_file(text, tiny_roster(), skip);
  CHECK(r.skipped_pas == 1);
  CHECK(r.games[0].pas.size() == 1);
  CHECK(!r.warnings.empty());
}

TEST_CASE("study window filter keeps season and park") {
  auto pas = parse_pa_csv(read_text_file(kData + "/expected_pa.csv"));
  auto study = StudyConfig::standard();
  CHECK(filter_study_window(pas, study).size() == pas.size());
  study.seasons = {2016};
  CHECK(filter_study_window(pas, study).empty());
}
