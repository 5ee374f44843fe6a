#include <doctest.h>

#include "parkfx/common.hpp"

using namespace parkfx;

TEST_CASE("matchup encoding") {
  for (Matchup m : kMatchups) {
    CHECK(make_matchup(batter_hand(m), pitcher_hand(m)) == m);
    CHECK(parse_matchup(to_string(m)) == m);
  }
  CHECK(to_string(make_matchup(Hand::L, Hand::R)) == "LR");
  CHECK_THROWS_AS(parse_matchup("LX"), DataError);
  CHECK_THROWS_AS(parse_hand("B"), DataError);
}

TEST_CASE("canonical parks") {
  const auto& parks = canonical_parks();
  CHECK(parks.size() == 30);
  CHECK(std::is_sorted(parks.begin(), parks.end()));
  CHECK(find_park(parks, "WAS").has_value());
  CHECK(!find_park(parks, "MON").has_value());
}

TEST_CASE("csv and number parsing") {
  CHECK(split_csv_line("a,b,,c d") == std::vector<std::string>{"a", "b", "", "c d"});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
  CHECK(parse_double("0.125") == 0.125);
  CHECK(parse_int("-7") == -7);
  CHECK_THROWS(parse_double("1.5x"));
  CHECK_THROWS(parse_int("3.0"));
}

TEST_CASE("descending ranks break ties by key") {
  std::vector<double> v{0.5, 2.0, 0.5, 1.0};
  std::vector<std::string> k{"DDD", "AAA", "BBB", "CCC"};
  CHECK(rank_descending(v, k) == std::vector<int>{4, 1, 3, 2});
}
