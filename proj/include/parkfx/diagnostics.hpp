#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parkfx/covariates.hpp"
#include "parkfx/glmm.hpp"

namespace parkfx {

/// Observed count distribution of the game-matchups whose fitted mean rounds
/// to the same multiple of the bin width.
struct PoissonnessBin {
  int bin = 0;          // fitted mean / width, rounded
  double lambda = 0.0;  // bin * width
  long long n = 0;
  std::vector<long long> counts;          // k = 0..k_max
  std::vector<double> rel_freq;
  std::vector<double> fitted;             // Poisson pmf at lambda
  std::vector<std::optional<double>> phi; // log(k! n_k / N), absent when n_k = 0
};

/// Bins sorted by lambda. Observations whose fitted mean rounds to zero are
/// left out, since no Poisson reference line exists there.
std::vector<PoissonnessBin> poissonness_bins(std::span<const double> lambda_hat,
                                             std::span<const double> y, double bin_width = 0.2);

double phi(long long k, long long n_k, long long n);

/// Reference line (intercept -lambda, slope log lambda).
std::pair<double, double> poissonness_line(double lambda);

/// Bins with at least `min_n` observations.
std::vector<PoissonnessBin> plot_bins(const std::vector<PoissonnessBin>& bins, long long min_n = 30);

std::string render_poissonness_svg(const std::vector<PoissonnessBin>& bins);

struct ModelComparisonRow {
  std::string model;
  int df = 0;
  double s2 = 0.0;
  double aic = 0.0;
};

/// Per-game residual variance: each game's prediction is the sum of its
/// matchup predictions at the observed personnel sums (absent matchups add 0).
ModelComparisonRow game_residual_variance(const FittedModel& model,
                                          const std::vector<GameMatchupObservation>& observations);
std::vector<ModelComparisonRow> game_residual_variance(
    const std::vector<FittedModel>& models, const std::vector<GameMatchupObservation>& observations);

void write_bin_csv(std::ostream& out, const PoissonnessBin& bin);
void write_comparison_csv(std::ostream& out, const std::vector<ModelComparisonRow>& rows);

}  // namespace parkfx
