#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parkfx/common.hpp"
#include "parkfx/covariates.hpp"
#include "parkfx/glmm.hpp"
#include "parkfx/park_effects.hpp"

namespace parkfx {

/// Park code -> division label.
using DivisionMap = std::map<std::string, std::string>;

/// The six MLB divisions as listed for the study's parks. `LAA` is accepted
/// as an alias of `ANA` by `division_of`.
const DivisionMap& default_divisions();
std::string_view division_of(const DivisionMap& divisions, std::string_view park);

/// Throws UsageError unless there are 30 parks, 6 divisions and 5 parks each.
void validate_divisions(const DivisionMap& divisions);

/// Adjusted mean at league-average personnel minus the empirical HR/g.
double adjustment_magnitude(const FittedModel& model,
                            const std::vector<GameMatchupObservation>& observations,
                            const MatchupAverages& averages, std::string_view park, Matchup m);

/// The same quantity for every park, read off a rank report.
std::map<std::string, double> adjustment_magnitudes(const AdjustedMeansReport& report, Matchup m);

struct AnovaResult {
  Matchup matchup = Matchup::LL;
  double ss_division = 0.0;
  double ss_within = 0.0;
  double ss_total = 0.0;
  int df_division = 0;
  int df_error = 0;
  int df_total = 0;
  double r2 = 0.0;  // NaN when ss_total is zero
  bool r2_defined = true;
};

AnovaResult one_way_anova(const std::map<std::string, double>& values, const DivisionMap& divisions,
                          Matchup m = Matchup::LL);

void write_anova_csv(std::ostream& out, const std::vector<AnovaResult>& results);

}  // namespace parkfx
