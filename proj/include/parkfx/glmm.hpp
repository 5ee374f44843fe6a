#pragma once

// Poisson log-linear mixed model for game x matchup home-run counts:
//
//   log lambda_i = b0 + bB zB_i + bP zP_i + beta[park_i, matchup_i] + S[season_i]
//
// with one park x matchup cell pinned to zero and S ~ N(0, sigma2) (or
// sum-to-zero fixed season effects, or none). Random-season fits maximise
// the Laplace-approximate marginal likelihood: penalized IRLS over
// (fixed, season) effects for a given sigma, and a one-dimensional search
// over sigma on the outside.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "parkfx/common.hpp"
#include "parkfx/covariates.hpp"

namespace parkfx {

enum class SeasonMode { random, fixed, none };

std::string_view to_string(SeasonMode mode) noexcept;
SeasonMode parse_season_mode(std::string_view s);

struct ParkCell {
  std::string park;
  Matchup matchup = Matchup::RR;
};

struct ModelSpec {
  std::string label = "full";
  bool use_zb = true;
  bool use_zp = true;
  bool park_matchup = true;
  SeasonMode season_mode = SeasonMode::random;
  std::vector<std::string> parks = canonical_parks();
  std::vector<int> seasons;  // empty: taken from the observations
  ParkCell reference{"WAS", Matchup::RR};

  static ModelSpec full() { return {}; }
  /// One of: full, park,season, personnel,season, zb,season, zp,season.
  static ModelSpec subset(std::string_view name);
  static const std::vector<std::string>& subset_names();

  void validate() const;
};

/// Sparse view of one design row: every row carries the intercept, the two
/// personnel sums, at most one park x matchup indicator and one season.
struct DesignRow {
  std::size_t observation = 0;
  double zb = 0.0;
  double zp = 0.0;
  int cell_column = -1;   // fixed-effect column of the park x matchup indicator, -1 if none
  int season_index = -1;  // into Design::seasons, -1 when seasons are not modelled
};

struct Design {
  ModelSpec spec;
  std::vector<DesignRow> rows;
  std::vector<std::string> columns;  // fixed-effect column names, in order
  std::vector<int> seasons;
  /// cell (park_index * 4 + matchup) -> column; kReferenceCell or kEmptyCell otherwise.
  std::vector<int> cell_column;
  std::vector<std::string> warnings;
  int zb_column = -1;
  int zp_column = -1;
  int first_season_column = -1;  // sum-to-zero season contrasts (fixed mode)

  static constexpr int kReferenceCell = -1;
  static constexpr int kEmptyCell = -2;

  std::size_t n_fixed() const noexcept { return columns.size(); }
  std::size_t n_random() const noexcept {
    return spec.season_mode == SeasonMode::random ? seasons.size() : 0;
  }
  /// Nonzero fixed-effect entries (column, value) of a row.
  void entries(const DesignRow& row, std::vector<std::pair<int, double>>& out) const;
  /// Human-readable column layout.
  std::string report() const;
};

/// Throws DataError naming any park, matchup cell or season outside the spec's domain.
Design build_design(const std::vector<GameMatchupObservation>& observations, const ModelSpec& spec);

std::vector<double> response(const std::vector<GameMatchupObservation>& observations);

struct LikelihoodTerms {
  double loglik = 0.0;
  Eigen::VectorXd score;  // [fixed..., season effects...]
  Eigen::MatrixXd info;   // expected (= observed, canonical link) information
};

/// Poisson log-likelihood sum_i (y_i eta_i - exp(eta_i) - log y_i!) with
/// eta_i = x_i'fixed + season_effects[s_i]. Season effects are only used
/// for random-season designs.
LikelihoodTerms loglik_score_info(const Design& design, std::span<const double> y,
                                  const Eigen::VectorXd& fixed,
                                  const Eigen::VectorXd& season_effects);

struct FitOptions {
  double tol = 1e-8;         // relative objective change
  double score_tol = 1e-6;   // max |score| at the optimum
  int max_iter = 200;        // penalized IRLS iterations per sigma
  double ridge = 1e-8;       // applied to columns of cells without home runs
  double max_sigma = 2.0;    // upper end of the season-SD search
};

struct FittedModel {
  ModelSpec spec;
  std::vector<std::string> columns;
  std::vector<int> cell_column;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd cov_fixed;

  double beta0 = 0.0;
  double betaB = 0.0;
  double betaP = 0.0;
  std::vector<std::array<double, 4>> park_effects;  // NaN for cells without data
  std::vector<std::array<double, 4>> park_se;

  std::vector<int> seasons;
  std::vector<double> season_effects;
  double sigma2_season = 0.0;

  double loglik = 0.0;  // Laplace marginal for random seasons, exact otherwise
  std::size_t n_obs = 0;
  bool converged = false;
  int iterations = 0;         // penalized IRLS iterations of the final fit
  int outer_evaluations = 0;  // sigma values tried
  std::vector<double> trajectory;  // penalized objective per accepted IRLS step (final fit)
  std::string data_fingerprint;
  std::vector<std::string> warnings;

  /// Number of estimated parameters: fixed effects plus the variance component.
  int df() const noexcept;
  double standard_error(std::size_t column) const;
  /// Column of the park x matchup term for (park, m); -1 for the reference or
  /// models without park terms. Throws DataError for unknown parks or empty cells.
  int cell_column_for(std::string_view park, Matchup m) const;
  /// Log-mean for an observation, including its season effect (0 for unseen seasons).
  double linear_predictor(const GameMatchupObservation& obs) const;
  double predict(const GameMatchupObservation& obs) const;
};

FittedModel fit(const Design& design, std::span<const double> y, const FitOptions& options = {});
FittedModel fit(const std::vector<GameMatchupObservation>& observations, const ModelSpec& spec,
                const FitOptions& options = {});

double aic(const FittedModel& model);

/// Stable hash of an observation set, used to check that reports combine
/// models and data that belong together.
std::string fingerprint(const std::vector<GameMatchupObservation>& observations);

nlohmann::json to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& j);

}  // namespace parkfx
