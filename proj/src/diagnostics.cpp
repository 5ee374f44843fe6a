#include "parkfx/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/core.h>

namespace parkfx {

double phi(long long k, long long n_k, long long n) {
  return std::lgamma(static_cast<double>(k) + 1.0) + std::log(static_cast<double>(n_k)) -
         std::log(static_cast<double>(n));
}

std::vector<PoissonnessBin> poissonness_bins(std::span<const double> lambda_hat,
                                             std::span<const double> y, double bin_width) {
  if (lambda_hat.size() != y.size()) throw UsageError("fitted means and counts differ in length");
  if (!(bin_width > 0.0)) throw UsageError("bin width must be positive");
  std::map<int, std::vector<long long>> tallies;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(lambda_hat[i] > 0.0)) throw DataError("fitted means must be positive");
    auto b = static_cast<int>(std::lround(lambda_hat[i] / bin_width));
    if (b == 0) continue;
    auto k = static_cast<std::size_t>(y[i]);
    auto& c = tallies[b];
    if (c.size() <= k) c.resize(k + 1, 0);
    c[k] += 1;
  }
  std::vector<PoissonnessBin> out;
  for (auto& [b, counts] : tallies) {
    PoissonnessBin bin;
    bin.bin = b;
    bin.lambda = b * bin_width;
    bin.counts = std::move(counts);
    for (auto c : bin.counts) bin.n += c;
    const double n = static_cast<double>(bin.n);
    for (std::size_t k = 0; k < bin.counts.size(); ++k) {
      auto kk = static_cast<double>(k);
      bin.rel_freq.push_back(static_cast<double>(bin.counts[k]) / n);
      bin.fitted.push_back(std::exp(-bin.lambda + kk * std::log(bin.lambda) - std::lgamma(kk + 1.0)));
      bin.phi.push_back(bin.counts[k] > 0
                            ? std::optional<double>(phi(static_cast<long long>(k), bin.counts[k], bin.n))
                            : std::nullopt);
    }
    out.push_back(std::move(bin));
  }
  return out;
}

std::pair<double, double> poissonness_line(double lambda) {
  if (!(lambda > 0.0)) throw UsageError("Poissonness line needs a positive mean");
  return {-lambda, std::log(lambda)};
}

std::vector<PoissonnessBin> plot_bins(const std::vector<PoissonnessBin>& bins, long long min_n) {
  std::vector<PoissonnessBin> out;
  std::copy_if(bins.begin(), bins.end(), std::back_inserter(out),
               [&](const PoissonnessBin& b) { return b.n >= min_n; });
  return out;
}

std::string render_poissonness_svg(const std::vector<PoissonnessBin>& bins) {
  constexpr int cols = 4;
  constexpr double pw = 220, ph = 180, margin = 36;
  const int rows = static_cast<int>((bins.size() + cols - 1) / cols);
  const double width = cols * pw, height = std::max(1, rows) * ph;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height, width, height);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const auto& bin = bins[b];
    const double ox = static_cast<double>(b % cols) * pw, oy = static_cast<double>(b / cols) * ph;
    const auto kmax = static_cast<double>(std::max<std::size_t>(bin.counts.size(), 2) - 1);
    auto [a, s] = poissonness_line(bin.lambda);
    double lo = std::min(a, a + s * kmax), hi = std::max(a, a + s * kmax);
    for (const auto& p : bin.phi)
      if (p) {
        lo = std::min(lo, *p);
        hi = std::max(hi, *p);
      }
    double pad = 0.1 * std::max(hi - lo, 1.0);
    lo -= pad;
    hi += pad;
    auto x = [&](double k) { return ox + margin + k / kmax * (pw - 1.5 * margin); };
    auto y = [&](double v) { return oy + ph - margin - (v - lo) / (hi - lo) * (ph - 1.5 * margin); };
    svg += fmt::format("<g id=\"panel-{}\">\n", b);
    svg += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"#999\"/>\n",
        ox + margin, oy + margin / 2, pw - 1.5 * margin, ph - 1.5 * margin);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">lambda = {:.1f}, N = {}</text>\n",
        ox + margin, oy + margin / 2 - 4, bin.lambda, bin.n);
    svg += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"firebrick\"/>\n", x(0),
        y(a), x(kmax), y(a + s * kmax));
    for (std::size_t k = 0; k < bin.phi.size(); ++k)
      if (bin.phi[k])
        svg += fmt::format(
            "<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.5\" fill=\"black\" data-k=\"{}\" data-phi=\"{:.6f}\"/>\n",
            x(static_cast<double>(k)), y(*bin.phi[k]), k, *bin.phi[k]);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"10\">k</text>\n",
                       ox + pw / 2, oy + ph - 8);
    svg += "</g>\n";
  }
  return svg + "</svg>\n";
}

ModelComparisonRow game_residual_variance(const FittedModel& model,
                                          const std::vector<GameMatchupObservation>& observations) {
  if (!model.data_fingerprint.empty() && model.data_fingerprint != fingerprint(observations))
    throw DataError(fmt::format("model '{}' was fitted on a different observation set", model.spec.label));
  std::map<std::string, std::pair<double, double>> games;  // observed, predicted
  for (const auto& o : observations) {
    auto& g = games[o.game_id];
    g.first += static_cast<double>(o.hrsum);
    g.second += model.predict(o);
  }
  ModelComparisonRow row{model.spec.label, model.df(), 0.0, aic(model)};
  if (games.size() < 2) return row;
  double mean = 0.0;
  for (const auto& [id, g] : games) mean += g.first - g.second;
  mean /= static_cast<double>(games.size());
  double ss = 0.0;
  for (const auto& [id, g] : games) ss += (g.first - g.second - mean) * (g.first - g.second - mean);
  row.s2 = ss / static_cast<double>(games.size() - 1);
  return row;
}

std::vector<ModelComparisonRow> game_residual_variance(
    const std::vector<FittedModel>& models, const std::vector<GameMatchupObservation>& observations) {
  std::vector<ModelComparisonRow> rows;
  for (const auto& m : models) rows.push_back(game_residual_variance(m, observations));
  return rows;
}

void write_bin_csv(std::ostream& out, const PoissonnessBin& bin) {
  out << "k,n_k,rel_freq,fitted,phi\n";
  for (std::size_t k = 0; k < bin.counts.size(); ++k)
    out << fmt::format("{},{},{:.4f},{:.4f},{}\n", k, bin.counts[k], bin.rel_freq[k], bin.fitted[k],
                       bin.phi[k] ? fmt::format("{:.4f}", *bin.phi[k]) : std::string("NA"));
}

void write_comparison_csv(std::ostream& out, const std::vector<ModelComparisonRow>& rows) {
  out << "model,df,s2,aic\n";
  for (const auto& r : rows)
    out << fmt::format("\"{}\",{},{:.4f},{:.1f}\n", r.model, r.df, r.s2, r.aic);
}

}  // namespace parkfx
