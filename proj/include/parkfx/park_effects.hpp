#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parkfx/common.hpp"
#include "parkfx/covariates.hpp"
#include "parkfx/glmm.hpp"
#include "parkfx/ingest.hpp"

namespace parkfx {

struct MatchupAverage {
  double pa_per_game = 0.0;  // mean PA count over games in which the matchup occurred
  double zb = 0.0;
  double zp = 0.0;
  long long games = 0;
};

struct MatchupAverages {
  std::array<MatchupAverage, 4> by_matchup{};
  const MatchupAverage& operator[](Matchup m) const { return by_matchup[index(m)]; }
  MatchupAverage& operator[](Matchup m) { return by_matchup[index(m)]; }
};

MatchupAverages matchup_averages(const std::vector<GameMatchupObservation>& observations);

struct AdjustedMean {
  double lambda = 0.0;
  double se = 0.0;
};

/// Model mean at the matchup's league-average personnel sums, season effect
/// at zero. The SE is the delta-method SE from the fixed-effect covariance.
AdjustedMean adjusted_mean(const FittedModel& model, std::string_view park, Matchup m,
                           const MatchupAverages& averages);

/// Sum of the park's four adjusted matchup means.
double marginal_adjusted_mean(const FittedModel& model, std::string_view park,
                              const MatchupAverages& averages);

double personnel_summary(const FittedModel& model, double zb, double zp);

struct ParkMatchupRow {
  std::string park;
  double zb = 0.0;  // mean over the park's observations of this matchup
  double zp = 0.0;
  double z = 0.0;   // slope-weighted personnel summary
  int rank_z = 0;
  double lambda = 0.0;
  double se_lambda = 0.0;
  int rank_lambda = 0;
  double hr_per_game = 0.0;
  int rank_hr_per_game = 0;
  int delta_rank = 0;  // rank_hr_per_game - rank_lambda
  long long games = 0;
};

struct ParkMarginalRow {
  std::string park;
  std::array<double, 4> lambda_by_matchup{};
  double lambda = 0.0;
  int rank_lambda = 0;
  double hr_per_game = 0.0;  // park HR total over distinct games at the park
  int rank_hr_per_game = 0;
  int delta_rank = 0;
  int cluster = 0;
  long long games = 0;
};

/// Ranks count from the most home-run friendly (rank 1 = largest value);
/// `from_least` gives the same ordering counted from the other end.
struct AdjustedMeansReport {
  std::array<std::vector<ParkMatchupRow>, 4> by_matchup;  // park order of the model
  std::vector<ParkMarginalRow> marginals;
  std::array<double, 4> mean_se{};  // average se_lambda over parks, per matchup
  double cluster_threshold = 0.0;

  static int from_least(int rank, std::size_t n) { return static_cast<int>(n) + 1 - rank; }
};

inline constexpr double kDefaultClusterThreshold = 0.085;

/// Throws DataError when the model was fitted on a different observation set.
AdjustedMeansReport rank_report(const FittedModel& model,
                                const std::vector<GameMatchupObservation>& observations,
                                const MatchupAverages& averages,
                                double cluster_threshold = kDefaultClusterThreshold);

/// Labels 1..K in increasing order of the marginal; a new cluster starts
/// where consecutive sorted values differ by more than the threshold.
std::vector<int> cluster_marginals(const std::vector<double>& marginals, double gap_threshold);

struct TeamHrTally {
  long long home_hr_hit = 0;
  long long home_hr_allowed = 0;
  long long home_games = 0;
  long long road_hr_hit = 0;
  long long road_hr_allowed = 0;
  long long road_games = 0;
};

/// Home HR per game (hit + allowed) over road HR per game.
double hrpf(const TeamHrTally& t);

/// Per-game summary kept by ingest for the classical park factor.
struct GameLine {
  std::string game_id;
  int season = 0;
  std::string park;
  std::string home_team;
  std::string visiting_team;
  int home_hr = 0;
  int visitor_hr = 0;

  bool operator==(const GameLine&) const = default;
};

std::vector<GameLine> game_lines(const ParseResult& parsed);
std::map<std::string, TeamHrTally> team_hr_tallies(const std::vector<GameLine>& games);

void write_games_csv(std::ostream& out, const std::vector<GameLine>& games);
std::vector<GameLine> parse_games_csv(std::string_view text);

void write_matchup_table_csv(std::ostream& out, const std::vector<ParkMatchupRow>& rows);
void write_marginal_table_csv(std::ostream& out, const std::vector<ParkMarginalRow>& rows);
void write_matchup_averages_csv(std::ostream& out, const MatchupAverages& averages);
void write_hrpf_csv(std::ostream& out, const std::map<std::string, TeamHrTally>& tallies);

/// Step plot of the empirical CDF of the marginal means, points labelled by park.
std::string render_ecdf_svg(const std::vector<ParkMarginalRow>& rows);

}  // namespace parkfx
