#include "parkfx/glmm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>

#include <boost/math/tools/minima.hpp>
#include <fmt/core.h>

namespace parkfx {

std::string_view to_string(SeasonMode mode) noexcept {
  switch (mode) {
    case SeasonMode::random:
      return "random";
    case SeasonMode::fixed:
      return "fixed";
    case SeasonMode::none:
      return "none";
  }
  return "random";
}

SeasonMode parse_season_mode(std::string_view s) {
  if (s == "random") return SeasonMode::random;
  if (s == "fixed") return SeasonMode::fixed;
  if (s == "none") return SeasonMode::none;
  throw UsageError(fmt::format("unknown season mode '{}'", s));
}

const std::vector<std::string>& ModelSpec::subset_names() {
  static const std::vector<std::string> names{"full", "park,season", "personnel,season",
                                              "zb,season", "zp,season"};
  return names;
}

ModelSpec ModelSpec::subset(std::string_view name) {
  ModelSpec s;
  s.label = std::string(name);
  if (name == "full") return s;
  if (name == "park,season") {
    s.use_zb = s.use_zp = false;
  } else if (name == "personnel,season") {
    s.park_matchup = false;
  } else if (name == "zb,season") {
    s.park_matchup = false;
    s.use_zp = false;
  } else if (name == "zp,season") {
    s.park_matchup = false;
    s.use_zb = false;
  } else {
    throw UsageError(fmt::format("unknown model subset '{}'", name));
  }
  return s;
}

void ModelSpec::validate() const {
  if (parks.empty()) throw UsageError("model spec has no parks");
  std::set<std::string> distinct(parks.begin(), parks.end());
  if (distinct.size() != parks.size()) throw UsageError("model spec lists a park twice");
  if (park_matchup && !find_park(parks, reference.park))
    throw UsageError(fmt::format("reference park '{}' is not in the park set", reference.park));
}

void Design::entries(const DesignRow& row, std::vector<std::pair<int, double>>& out) const {
  out.clear();
  out.emplace_back(0, 1.0);
  if (zb_column >= 0) out.emplace_back(zb_column, row.zb);
  if (zp_column >= 0) out.emplace_back(zp_column, row.zp);
  if (row.cell_column >= 0) out.emplace_back(row.cell_column, 1.0);
  if (first_season_column >= 0 && row.season_index >= 0) {
    auto last = static_cast<int>(seasons.size()) - 1;
    if (row.season_index < last) {
      out.emplace_back(first_season_column + row.season_index, 1.0);
    } else {
      for (int s = 0; s < last; ++s) out.emplace_back(first_season_column + s, -1.0);
    }
  }
}

std::string Design::report() const {
  std::string r = fmt::format("model {}: {} rows, {} fixed columns, {} random season effects\n",
                              spec.label, rows.size(), n_fixed(), n_random());
  for (std::size_t j = 0; j < columns.size(); ++j) r += fmt::format("  [{}] {}\n", j, columns[j]);
  if (spec.park_matchup)
    r += fmt::format("  reference cell {}:{} fixed at 0\n", spec.reference.park,
                     to_string(spec.reference.matchup));
  for (const auto& w : warnings) r += fmt::format("  warning: {}\n", w);
  return r;
}

namespace {

std::string cell_name(std::string_view park, Matchup m) {
  return fmt::format("{}:{}", park, to_string(m));
}

}  // namespace

Design build_design(const std::vector<GameMatchupObservation>& observations,
                    const ModelSpec& spec) {
  spec.validate();
  if (observations.empty()) throw DataError("no observations to fit");
  Design d;
  d.spec = spec;

  std::vector<int> seasons = spec.seasons;
  if (seasons.empty()) {
    std::set<int> seen;
    for (const auto& o : observations) seen.insert(o.season);
    seasons.assign(seen.begin(), seen.end());
  } else {
    std::sort(seasons.begin(), seasons.end());
    seasons.erase(std::unique(seasons.begin(), seasons.end()), seasons.end());
  }
  if (spec.season_mode != SeasonMode::none) d.seasons = seasons;

  // Occupancy and home-run totals per cell, with domain checks.
  const std::size_t n_cells = spec.parks.size() * 4;
  std::vector<long long> cell_obs(n_cells, 0), cell_hr(n_cells, 0);
  std::vector<std::size_t> obs_cell(observations.size());
  std::vector<int> obs_season(observations.size(), -1);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& o = observations[i];
    auto p = find_park(spec.parks, o.park);
    if (!p) throw DataError(fmt::format("observation {} ({}): unknown park '{}'", i, o.game_id, o.park));
    auto it = std::lower_bound(seasons.begin(), seasons.end(), o.season);
    if (it == seasons.end() || *it != o.season)
      throw DataError(fmt::format("observation {} ({}): season {} is outside the model's seasons", i,
                                  o.game_id, o.season));
    obs_cell[i] = *p * 4 + index(o.matchup);
    obs_season[i] = static_cast<int>(it - seasons.begin());
    cell_obs[obs_cell[i]] += 1;
    cell_hr[obs_cell[i]] += o.hrsum;
  }

  d.columns.push_back("(Intercept)");
  if (spec.use_zb) {
    d.zb_column = static_cast<int>(d.columns.size());
    d.columns.push_back("zB");
  }
  if (spec.use_zp) {
    d.zp_column = static_cast<int>(d.columns.size());
    d.columns.push_back("zP");
  }
  d.cell_column.assign(n_cells, Design::kReferenceCell);
  if (spec.park_matchup) {
    std::size_t ref = *find_park(spec.parks, spec.reference.park) * 4 + index(spec.reference.matchup);
    if (cell_obs[ref] == 0)
      throw DataError(fmt::format("reference cell {} has no observations",
                                  cell_name(spec.reference.park, spec.reference.matchup)));
    for (std::size_t p = 0; p < spec.parks.size(); ++p) {
      for (Matchup m : kMatchups) {
        std::size_t c = p * 4 + index(m);
        if (c == ref) continue;
        if (cell_obs[c] == 0) {
          d.cell_column[c] = Design::kEmptyCell;
          d.warnings.push_back(
              fmt::format("cell {} has no observations; its effect is not estimable", cell_name(spec.parks[p], m)));
          continue;
        }
        if (cell_hr[c] == 0)
          d.warnings.push_back(
              fmt::format("cell {} has no home runs; its effect is ridge-stabilised", cell_name(spec.parks[p], m)));
        d.cell_column[c] = static_cast<int>(d.columns.size());
        d.columns.push_back(cell_name(spec.parks[p], m));
      }
    }
  }
  if (spec.season_mode == SeasonMode::fixed && seasons.size() > 1) {
    d.first_season_column = static_cast<int>(d.columns.size());
    for (std::size_t s = 0; s + 1 < seasons.size(); ++s)
      d.columns.push_back(fmt::format("season[{}]", seasons[s]));
  }

  d.rows.reserve(observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    DesignRow r;
    r.observation = i;
    r.zb = observations[i].zb;
    r.zp = observations[i].zp;
    r.cell_column = spec.park_matchup ? std::max(d.cell_column[obs_cell[i]], -1) : -1;
    r.season_index = spec.season_mode == SeasonMode::none ? -1 : obs_season[i];
    d.rows.push_back(r);
  }
  return d;
}

std::vector<double> response(const std::vector<GameMatchupObservation>& observations) {
  std::vector<double> y;
  y.reserve(observations.size());
  for (const auto& o : observations) y.push_back(static_cast<double>(o.hrsum));
  return y;
}

namespace {

/// Accumulates the Poisson log-likelihood and its derivatives for the
/// parameter vector [fixed..., u...] where eta = x'fixed + scale * u[s].
struct Accumulator {
  const Design& design;
  std::span<const double> y;
  std::vector<double> log_y_factorial;

  Accumulator(const Design& d, std::span<const double> counts) : design(d), y(counts) {
    if (y.size() != d.rows.size())
      throw DataError(fmt::format("response has {} values for {} design rows", y.size(), d.rows.size()));
    log_y_factorial.reserve(y.size());
    for (double v : y) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("response counts must be finite and >= 0");
      log_y_factorial.push_back(std::lgamma(v + 1.0));
    }
  }

  std::size_t p() const { return design.n_fixed(); }
  std::size_t q() const { return design.n_random(); }

  double loglik(const Eigen::VectorXd& theta, double scale) const {
    std::vector<std::pair<int, double>> e;
    double ll = 0.0;
    const auto np = static_cast<Eigen::Index>(p());
    for (std::size_t i = 0; i < design.rows.size(); ++i) {
      const auto& row = design.rows[i];
      design.entries(row, e);
      double eta = 0.0;
      for (auto [c, v] : e) eta += theta[c] * v;
      if (q() > 0) eta += scale * theta[np + row.season_index];
      ll += y[i] * eta - std::exp(eta) - log_y_factorial[i];
    }
    return ll;
  }

  /// Log-likelihood, score and information with respect to theta. Also
  /// returns the per-season weight sums (sum of mu) for the Laplace term.
  double derivatives(const Eigen::VectorXd& theta, double scale, Eigen::VectorXd& score,
                     Eigen::MatrixXd& info, Eigen::VectorXd* season_weight = nullptr) const {
    const auto np = static_cast<Eigen::Index>(p());
    const auto n = np + static_cast<Eigen::Index>(q());
    score.setZero(n);
    info.setZero(n, n);
    if (season_weight) season_weight->setZero(static_cast<Eigen::Index>(q()));
    std::vector<std::pair<int, double>> e;
    double ll = 0.0;
    for (std::size_t i = 0; i < design.rows.size(); ++i) {
      const auto& row = design.rows[i];
      design.entries(row, e);
      double eta = 0.0;
      for (auto [c, v] : e) eta += theta[c] * v;
      const bool has_u = q() > 0;
      const Eigen::Index su = has_u ? np + row.season_index : -1;
      if (has_u) eta += scale * theta[su];
      const double mu = std::exp(eta);
      const double r = y[i] - mu;
      ll += y[i] * eta - mu - log_y_factorial[i];
      for (std::size_t a = 0; a < e.size(); ++a) {
        auto [ca, va] = e[a];
        score[ca] += va * r;
        for (std::size_t b = a; b < e.size(); ++b) {
          auto [cb, vb] = e[b];
          info(std::min(ca, cb), std::max(ca, cb)) += mu * va * vb;
        }
        if (has_u) info(ca, su) += mu * va * scale;
      }
      if (has_u) {
        score[su] += scale * r;
        info(su, su) += mu * scale * scale;
        if (season_weight) (*season_weight)[row.season_index] += mu;
      }
    }
    info.triangularView<Eigen::StrictlyLower>() = info.transpose();
    return ll;
  }
};

struct InnerResult {
  Eigen::VectorXd theta;
  Eigen::MatrixXd hessian;  // negative Hessian of the penalized objective
  double penalized = 0.0;   // loglik - |u|^2/2 - ridge terms
  double loglik = 0.0;
  double laplace = 0.0;     // penalized - log det(scale^2 Z'WZ + I)/2
  int iterations = 0;
  std::vector<double> trajectory;
};

class PenalizedIrls {
 public:
  PenalizedIrls(const Design& design, std::span<const double> y, const FitOptions& options)
      : acc_(design, y), options_(options), ridge_mask_(design.n_fixed(), 0.0) {
    // Ridge columns: cells with no home runs.
    std::vector<double> col_hr(design.n_fixed(), 0.0);
    std::vector<bool> has_cell(design.n_fixed(), false);
    for (std::size_t i = 0; i < design.rows.size(); ++i) {
      int c = design.rows[i].cell_column;
      if (c >= 0) {
        col_hr[static_cast<std::size_t>(c)] += y[i];
        has_cell[static_cast<std::size_t>(c)] = true;
      }
    }
    for (std::size_t j = 0; j < design.n_fixed(); ++j)
      if (has_cell[j] && col_hr[j] == 0.0) ridge_mask_[j] = options.ridge;
  }

  std::size_t p() const { return acc_.p(); }
  std::size_t q() const { return acc_.q(); }
  bool ridged() const {
    return std::any_of(ridge_mask_.begin(), ridge_mask_.end(), [](double r) { return r > 0.0; });
  }

  InnerResult run(Eigen::VectorXd theta, double scale) const {
    const auto np = static_cast<Eigen::Index>(p());
    const auto nq = static_cast<Eigen::Index>(q());
    InnerResult res;
    Eigen::VectorXd score, season_weight;
    Eigen::MatrixXd info;

    auto evaluate = [&](const Eigen::VectorXd& t) {
      double ll = acc_.derivatives(t, scale, score, info, &season_weight);
      double pen = 0.0;
      for (Eigen::Index j = 0; j < np; ++j) {
        double r = ridge_mask_[static_cast<std::size_t>(j)];
        if (r > 0.0) {
          pen += 0.5 * r * t[j] * t[j];
          score[j] -= r * t[j];
          info(j, j) += r;
        }
      }
      for (Eigen::Index s = 0; s < nq; ++s) {
        pen += 0.5 * t[np + s] * t[np + s];
        score[np + s] -= t[np + s];
        info(np + s, np + s) += 1.0;
      }
      return std::pair{ll - pen, ll};
    };
    auto objective = [&](const Eigen::VectorXd& t) {
      double pen = 0.0;
      for (Eigen::Index j = 0; j < np; ++j)
        pen += 0.5 * ridge_mask_[static_cast<std::size_t>(j)] * t[j] * t[j];
      for (Eigen::Index s = 0; s < nq; ++s) pen += 0.5 * t[np + s] * t[np + s];
      return acc_.loglik(t, scale) - pen;
    };

    auto [h, ll] = evaluate(theta);
    res.trajectory.push_back(h);
    double rel_change = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int iter = 0; iter <= options_.max_iter; ++iter) {
      res.iterations = iter;
      if (!std::isfinite(h)) break;
      const double max_score = score.cwiseAbs().maxCoeff();
      if (max_score < options_.score_tol && (rel_change < options_.tol || max_score == 0.0)) {
        converged = true;
        break;
      }
      if (iter == options_.max_iter) break;
      Eigen::LLT<Eigen::MatrixXd> llt(info);
      Eigen::VectorXd step;
      if (llt.info() == Eigen::Success) {
        step = llt.solve(score);
      } else {
        step = info.ldlt().solve(score);
      }
      // Inside the quadratic region the expected gain falls below the
      // resolution of the objective and comparisons become noise.
      const double expected_gain = 0.5 * score.dot(step);
      const double resolution = 1e-11 * std::max(1.0, std::abs(h));
      double t = 1.0;
      Eigen::VectorXd candidate;
      double h_new = -std::numeric_limits<double>::infinity();
      for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
        candidate = theta + t * step;
        h_new = objective(candidate);
        if (std::isfinite(h_new) && (h_new >= h || (halving == 0 && expected_gain < resolution &&
                                                    h_new >= h - resolution)))
          break;
      }
      if (!(std::isfinite(h_new) && h_new >= h - resolution)) {
        // No ascent possible in floating point: accept the current point if
        // the score is already negligible on the scale of the objective.
        if (max_score < options_.score_tol * 100.0) converged = true;
        break;
      }
      rel_change = std::abs(h_new - h) / std::max(1.0, std::abs(h));
      theta = std::move(candidate);
      std::tie(h, ll) = evaluate(theta);
      res.trajectory.push_back(h);
    }
    if (!converged) {
      throw ConvergenceError(
          fmt::format("penalized IRLS did not converge in {} iterations (season SD {:.6g})",
                      options_.max_iter, scale),
          res.trajectory);
    }
    res.theta = std::move(theta);
    res.hessian = std::move(info);
    res.penalized = h;
    res.loglik = ll;
    double logdet = 0.0;
    for (Eigen::Index s = 0; s < nq; ++s) logdet += std::log1p(scale * scale * season_weight[s]);
    // The ridge is a numerical device, not part of the model likelihood.
    double ridge_pen = 0.0;
    for (Eigen::Index j = 0; j < np; ++j)
      ridge_pen += 0.5 * ridge_mask_[static_cast<std::size_t>(j)] * res.theta[j] * res.theta[j];
    res.laplace = h + ridge_pen - 0.5 * logdet;
    return res;
  }

 private:
  Accumulator acc_;
  FitOptions options_;
  std::vector<double> ridge_mask_;
};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

LikelihoodTerms loglik_score_info(const Design& design, std::span<const double> y,
                                  const Eigen::VectorXd& fixed,
                                  const Eigen::VectorXd& season_effects) {
  Accumulator acc(design, y);
  const auto np = static_cast<Eigen::Index>(acc.p());
  const auto nq = static_cast<Eigen::Index>(acc.q());
  if (fixed.size() != np) throw UsageError("fixed-effect vector has the wrong length");
  if (nq > 0 && season_effects.size() != nq) throw UsageError("season-effect vector has the wrong length");
  Eigen::VectorXd theta(np + nq);
  theta.head(np) = fixed;
  if (nq > 0) theta.tail(nq) = season_effects;
  LikelihoodTerms t;
  t.loglik = acc.derivatives(theta, 1.0, t.score, t.info);
  return t;
}

FittedModel fit(const Design& design, std::span<const double> y, const FitOptions& options) {
  PenalizedIrls irls(design, y, options);
  const auto np = static_cast<Eigen::Index>(irls.p());
  const auto nq = static_cast<Eigen::Index>(irls.q());

  // Start from the intercept-only solution.
  Eigen::VectorXd start = Eigen::VectorXd::Zero(np + nq);
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(std::max<std::size_t>(y.size(), 1));
  start[0] = std::log(std::max(ybar, 1e-3));

  FittedModel m;
  int evaluations = 0;
  InnerResult best;
  double sigma = 0.0;
  if (nq == 0) {
    best = irls.run(start, 0.0);
    evaluations = 1;
  } else {
    // Profile the season SD. Warm starts carry fixed effects and the season
    // effects on their natural scale (u = sigma * v) between evaluations.
    Eigen::VectorXd warm = start;
    double warm_sigma = 0.0;
    auto rescale = [&](double to) {
      Eigen::VectorXd t = warm;
      for (Eigen::Index s = 0; s < nq; ++s)
        t[np + s] = (to > 0.0 && warm_sigma > 0.0) ? warm[np + s] * warm_sigma / to : 0.0;
      return t;
    };
    auto laplace_at = [&](double s) {
      ++evaluations;
      InnerResult r = irls.run(rescale(s), s);
      warm = r.theta;
      warm_sigma = s;
      return r;
    };
    InnerResult at_zero = laplace_at(0.0);
    auto neg = [&](double s) { return -laplace_at(s).laplace; };
    std::uintmax_t max_iter = 100;
    auto [s_hat, neg_val] = boost::math::tools::brent_find_minima(neg, 0.0, options.max_sigma, 30, max_iter);
    (void)neg_val;
    InnerResult at_hat = laplace_at(s_hat);
    if (at_zero.laplace >= at_hat.laplace) {
      best = irls.run(start, 0.0);
      ++evaluations;
      sigma = 0.0;
    } else {
      best = std::move(at_hat);
      sigma = s_hat;
    }
  }

  m.spec = design.spec;
  m.columns = design.columns;
  m.cell_column = design.cell_column;
  m.coefficients = best.theta.head(np);
  // Fixed-effect covariance from the joint penalized information, so season
  // uncertainty propagates into the fixed effects.
  Eigen::MatrixXd inv = best.hessian.ldlt().solve(Eigen::MatrixXd::Identity(np + nq, np + nq));
  m.cov_fixed = inv.topLeftCorner(np, np);
  m.cov_fixed = 0.5 * (m.cov_fixed + m.cov_fixed.transpose()).eval();

  m.beta0 = m.coefficients[0];
  m.betaB = design.zb_column >= 0 ? m.coefficients[design.zb_column] : 0.0;
  m.betaP = design.zp_column >= 0 ? m.coefficients[design.zp_column] : 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.park_effects.assign(design.spec.parks.size(), {nan, nan, nan, nan});
  m.park_se.assign(design.spec.parks.size(), {nan, nan, nan, nan});
  if (design.spec.park_matchup) {
    for (std::size_t p = 0; p < design.spec.parks.size(); ++p) {
      for (Matchup mu : kMatchups) {
        int c = design.cell_column[p * 4 + index(mu)];
        if (c == Design::kReferenceCell) {
          m.park_effects[p][index(mu)] = 0.0;
          m.park_se[p][index(mu)] = 0.0;
        } else if (c >= 0) {
          m.park_effects[p][index(mu)] = m.coefficients[c];
          m.park_se[p][index(mu)] = std::sqrt(std::max(0.0, m.cov_fixed(c, c)));
        }
      }
    }
  }

  m.seasons = design.seasons;
  if (nq > 0) {
    for (Eigen::Index s = 0; s < nq; ++s) m.season_effects.push_back(sigma * best.theta[np + s]);
  } else if (design.first_season_column >= 0) {
    double sum = 0.0;
    for (std::size_t s = 0; s + 1 < design.seasons.size(); ++s) {
      double v = m.coefficients[design.first_season_column + static_cast<Eigen::Index>(s)];
      m.season_effects.push_back(v);
      sum += v;
    }
    m.season_effects.push_back(-sum);
  } else if (design.spec.season_mode == SeasonMode::fixed) {
    m.season_effects.assign(design.seasons.size(), 0.0);
  }
  m.sigma2_season = sigma * sigma;
  m.loglik = nq > 0 ? best.laplace : best.loglik;
  m.n_obs = design.rows.size();
  m.converged = true;
  m.iterations = best.iterations;
  m.outer_evaluations = evaluations;
  m.trajectory = best.trajectory;
  m.warnings = design.warnings;
  return m;
}

FittedModel fit(const std::vector<GameMatchupObservation>& observations, const ModelSpec& spec,
                const FitOptions& options) {
  Design d = build_design(observations, spec);
  auto y = response(observations);
  FittedModel m = fit(d, y, options);
  m.data_fingerprint = fingerprint(observations);
  return m;
}

int FittedModel::df() const noexcept {
  return static_cast<int>(columns.size()) + (spec.season_mode == SeasonMode::random ? 1 : 0);
}

double FittedModel::standard_error(std::size_t column) const {
  if (column >= columns.size()) throw UsageError("coefficient index out of range");
  auto c = static_cast<Eigen::Index>(column);
  return std::sqrt(std::max(0.0, cov_fixed(c, c)));
}

int FittedModel::cell_column_for(std::string_view park, Matchup mu) const {
  if (!spec.park_matchup) return -1;
  auto p = find_park(spec.parks, park);
  if (!p) throw DataError(fmt::format("unknown park '{}'", park));
  int c = cell_column[*p * 4 + index(mu)];
  if (c == Design::kEmptyCell)
    throw DataError(fmt::format("cell {}:{} was not estimated (no observations)", park, to_string(mu)));
  return c;
}

double FittedModel::linear_predictor(const GameMatchupObservation& obs) const {
  double eta = beta0 + betaB * obs.zb + betaP * obs.zp;
  int c = cell_column_for(obs.park, obs.matchup);
  if (c >= 0) eta += coefficients[c];
  auto it = std::lower_bound(seasons.begin(), seasons.end(), obs.season);
  if (it != seasons.end() && *it == obs.season && !season_effects.empty())
    eta += season_effects[static_cast<std::size_t>(it - seasons.begin())];
  return eta;
}

double FittedModel::predict(const GameMatchupObservation& obs) const {
  return std::exp(linear_predictor(obs));
}

double aic(const FittedModel& model) { return -2.0 * model.loglik + 2.0 * model.df(); }

std::string fingerprint(const std::vector<GameMatchupObservation>& observations) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const auto& o : observations) {
    h = fnv1a(h, o.game_id.data(), o.game_id.size());
    h = fnv1a(h, o.park.data(), o.park.size());
    std::int64_t ints[4]{o.season, static_cast<std::int64_t>(index(o.matchup)), o.hrsum, o.pa};
    h = fnv1a(h, ints, sizeof ints);
    std::uint64_t z[2]{std::bit_cast<std::uint64_t>(o.zb), std::bit_cast<std::uint64_t>(o.zp)};
    h = fnv1a(h, z, sizeof z);
  }
  return fmt::format("{:016x}", h);
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

nlohmann::json to_json(const FittedModel& m) {
  using nlohmann::json;
  json spec{{"label", m.spec.label},
            {"use_zb", m.spec.use_zb},
            {"use_zp", m.spec.use_zp},
            {"park_matchup", m.spec.park_matchup},
            {"season_mode", to_string(m.spec.season_mode)},
            {"parks", m.spec.parks},
            {"reference_cell", {{"park", m.spec.reference.park},
                                {"matchup", to_string(m.spec.reference.matchup)}}}};
  json coefs = json::array();
  for (std::size_t j = 0; j < m.columns.size(); ++j)
    coefs.push_back({{"name", m.columns[j]},
                     {"estimate", m.coefficients[static_cast<Eigen::Index>(j)]},
                     {"se", m.standard_error(j)}});
  json parks = json::object();
  for (std::size_t p = 0; p < m.spec.parks.size() && p < m.park_effects.size(); ++p) {
    json cell = json::object();
    for (Matchup mu : kMatchups)
      cell[std::string(to_string(mu))] = {{"estimate", number_or_null(m.park_effects[p][index(mu)])},
                                          {"se", number_or_null(m.park_se[p][index(mu)])}};
    parks[m.spec.parks[p]] = cell;
  }
  json cov = json::array();
  for (Eigen::Index r = 0; r < m.cov_fixed.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cov_fixed.cols(); ++c) row.push_back(m.cov_fixed(r, c));
    cov.push_back(row);
  }
  return json{{"model", m.spec.label},
              {"spec", spec},
              {"intercept", m.beta0},
              {"beta_b", m.betaB},
              {"beta_p", m.betaP},
              {"coefficients", coefs},
              {"park_effects", parks},
              {"seasons", m.seasons},
              {"season_effects", m.season_effects},
              {"sigma2_season", m.sigma2_season},
              {"loglik", m.loglik},
              {"aic", aic(m)},
              {"df", m.df()},
              {"df_convention", "fixed effects + 1 for the season variance when estimated"},
              {"n_obs", m.n_obs},
              {"converged", m.converged},
              {"iterations", m.iterations},
              {"outer_evaluations", m.outer_evaluations},
              {"trajectory", m.trajectory},
              {"data_fingerprint", m.data_fingerprint},
              {"warnings", m.warnings},
              {"cov_fixed", cov}};
}

FittedModel model_from_json(const nlohmann::json& j) {
  try {
    FittedModel m;
    const auto& s = j.at("spec");
    m.spec.label = s.at("label").get<std::string>();
    m.spec.use_zb = s.at("use_zb").get<bool>();
    m.spec.use_zp = s.at("use_zp").get<bool>();
    m.spec.park_matchup = s.at("park_matchup").get<bool>();
    m.spec.season_mode = parse_season_mode(s.at("season_mode").get<std::string>());
    m.spec.parks = s.at("parks").get<std::vector<std::string>>();
    m.spec.reference.park = s.at("reference_cell").at("park").get<std::string>();
    m.spec.reference.matchup = parse_matchup(s.at("reference_cell").at("matchup").get<std::string>());

    const auto& coefs = j.at("coefficients");
    m.coefficients.resize(static_cast<Eigen::Index>(coefs.size()));
    std::map<std::string, int> column_of;
    for (std::size_t c = 0; c < coefs.size(); ++c) {
      m.columns.push_back(coefs[c].at("name").get<std::string>());
      m.coefficients[static_cast<Eigen::Index>(c)] = coefs[c].at("estimate").get<double>();
      column_of[m.columns.back()] = static_cast<int>(c);
    }
    m.cell_column.assign(m.spec.parks.size() * 4, Design::kEmptyCell);
    for (std::size_t p = 0; p < m.spec.parks.size(); ++p)
      for (Matchup mu : kMatchups) {
        auto it = column_of.find(cell_name(m.spec.parks[p], mu));
        bool is_ref = m.spec.parks[p] == m.spec.reference.park && mu == m.spec.reference.matchup;
        m.cell_column[p * 4 + index(mu)] =
            it != column_of.end() ? it->second
                                  : (is_ref || !m.spec.park_matchup ? Design::kReferenceCell
                                                                    : Design::kEmptyCell);
      }

    const auto& cov = j.at("cov_fixed");
    auto n = static_cast<Eigen::Index>(m.columns.size());
    if (static_cast<Eigen::Index>(cov.size()) != n) throw DataError("cov_fixed has the wrong size");
    m.cov_fixed.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        m.cov_fixed(r, c) = cov.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();

    m.beta0 = j.at("intercept").get<double>();
    m.betaB = j.at("beta_b").get<double>();
    m.betaP = j.at("beta_p").get<double>();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.park_effects.assign(m.spec.parks.size(), {nan, nan, nan, nan});
    m.park_se.assign(m.spec.parks.size(), {nan, nan, nan, nan});
    const auto& parks = j.at("park_effects");
    for (std::size_t p = 0; p < m.spec.parks.size(); ++p) {
      if (!parks.contains(m.spec.parks[p])) continue;
      const auto& cell = parks.at(m.spec.parks[p]);
      for (Matchup mu : kMatchups) {
        const auto& e = cell.at(std::string(to_string(mu)));
        m.park_effects[p][index(mu)] = number_or_nan(e.at("estimate"));
        m.park_se[p][index(mu)] = number_or_nan(e.at("se"));
      }
    }
    m.seasons = j.at("seasons").get<std::vector<int>>();
    m.season_effects = j.at("season_effects").get<std::vector<double>>();
    m.sigma2_season = j.at("sigma2_season").get<double>();
    m.loglik = j.at("loglik").get<double>();
    m.n_obs = j.at("n_obs").get<std::size_t>();
    m.converged = j.at("converged").get<bool>();
    m.iterations = j.at("iterations").get<int>();
    m.outer_evaluations = j.value("outer_evaluations", 0);
    m.trajectory = j.value("trajectory", std::vector<double>{});
    m.data_fingerprint = j.value("data_fingerprint", std::string{});
    m.warnings = j.value("warnings", std::vector<std::string>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("model file: {}", e.what()));
  }
}

}  // namespace parkfx
