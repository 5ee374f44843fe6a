#include "parkfx/park_effects.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace parkfx {

MatchupAverages matchup_averages(const std::vector<GameMatchupObservation>& observations) {
  MatchupAverages a;
  std::array<double, 4> pa{}, zb{}, zp{};
  for (const auto& o : observations) {
    auto m = index(o.matchup);
    a.by_matchup[m].games += 1;
    pa[m] += static_cast<double>(o.pa);
    zb[m] += o.zb;
    zp[m] += o.zp;
  }
  for (std::size_t m = 0; m < 4; ++m) {
    auto n = static_cast<double>(a.by_matchup[m].games);
    if (n == 0) continue;
    a.by_matchup[m].pa_per_game = pa[m] / n;
    a.by_matchup[m].zb = zb[m] / n;
    a.by_matchup[m].zp = zp[m] / n;
  }
  return a;
}

AdjustedMean adjusted_mean(const FittedModel& model, std::string_view park, Matchup m,
                           const MatchupAverages& averages) {
  const auto& avg = averages[m];
  int c = model.cell_column_for(park, m);
  double eta = model.beta0 + model.betaB * avg.zb + model.betaP * avg.zp;
  if (c >= 0) eta += model.coefficients[c];

  Eigen::VectorXd g = Eigen::VectorXd::Zero(model.coefficients.size());
  g[0] = 1.0;
  for (std::size_t j = 1; j < model.columns.size(); ++j) {
    if (model.columns[j] == "zB") g[static_cast<Eigen::Index>(j)] = avg.zb;
    if (model.columns[j] == "zP") g[static_cast<Eigen::Index>(j)] = avg.zp;
  }
  if (c >= 0) g[c] = 1.0;
  double var = g.dot(model.cov_fixed * g);

  AdjustedMean r;
  r.lambda = std::exp(eta);
  r.se = r.lambda * std::sqrt(std::max(0.0, var));
  return r;
}

double marginal_adjusted_mean(const FittedModel& model, std::string_view park,
                              const MatchupAverages& averages) {
  double sum = 0.0;
  for (Matchup m : kMatchups) sum += adjusted_mean(model, park, m, averages).lambda;
  return sum;
}

double personnel_summary(const FittedModel& model, double zb, double zp) {
  return model.betaB * zb + model.betaP * zp;
}

std::vector<int> cluster_marginals(const std::vector<double>& marginals, double gap_threshold) {
  std::vector<std::size_t> order(marginals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return marginals[a] < marginals[b]; });
  std::vector<int> label(marginals.size(), 0);
  int cluster = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || marginals[order[k]] - marginals[order[k - 1]] > gap_threshold) ++cluster;
    label[order[k]] = cluster;
  }
  return label;
}

AdjustedMeansReport rank_report(const FittedModel& model,
                                const std::vector<GameMatchupObservation>& observations,
                                const MatchupAverages& averages, double cluster_threshold) {
  if (!model.data_fingerprint.empty() && model.data_fingerprint != fingerprint(observations))
    throw DataError("the model was fitted on a different observation set");
  const auto& parks = model.spec.parks;
  const std::size_t np = parks.size();

  struct Acc {
    double zb = 0.0, zp = 0.0, hr = 0.0;
    long long n = 0;
  };
  std::vector<std::array<Acc, 4>> cells(np);
  std::vector<double> park_hr(np, 0.0);
  std::vector<std::set<std::string>> park_games(np);
  for (const auto& o : observations) {
    auto p = find_park(parks, o.park);
    if (!p) throw DataError(fmt::format("observation {}: park '{}' is not in the model", o.game_id, o.park));
    auto& a = cells[*p][index(o.matchup)];
    a.zb += o.zb;
    a.zp += o.zp;
    a.hr += static_cast<double>(o.hrsum);
    a.n += 1;
    park_hr[*p] += static_cast<double>(o.hrsum);
    park_games[*p].insert(o.game_id);
  }

  AdjustedMeansReport rep;
  rep.cluster_threshold = cluster_threshold;
  for (Matchup m : kMatchups) {
    auto& rows = rep.by_matchup[index(m)];
    rows.resize(np);
    std::vector<double> z(np), lambda(np), hrg(np);
    double se_sum = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      const auto& a = cells[p][index(m)];
      auto& r = rows[p];
      r.park = parks[p];
      r.games = a.n;
      double n = a.n > 0 ? static_cast<double>(a.n) : 1.0;
      r.zb = a.zb / n;
      r.zp = a.zp / n;
      r.hr_per_game = a.hr / n;
      r.z = personnel_summary(model, r.zb, r.zp);
      auto adj = adjusted_mean(model, parks[p], m, averages);
      r.lambda = adj.lambda;
      r.se_lambda = adj.se;
      se_sum += adj.se;
      z[p] = r.z;
      lambda[p] = r.lambda;
      hrg[p] = r.hr_per_game;
    }
    rep.mean_se[index(m)] = np > 0 ? se_sum / static_cast<double>(np) : 0.0;
    auto rz = rank_descending(z, parks);
    auto rl = rank_descending(lambda, parks);
    auto rh = rank_descending(hrg, parks);
    for (std::size_t p = 0; p < np; ++p) {
      rows[p].rank_z = rz[p];
      rows[p].rank_lambda = rl[p];
      rows[p].rank_hr_per_game = rh[p];
      rows[p].delta_rank = rh[p] - rl[p];
    }
  }

  rep.marginals.resize(np);
  std::vector<double> lambda(np), hrg(np);
  for (std::size_t p = 0; p < np; ++p) {
    auto& r = rep.marginals[p];
    r.park = parks[p];
    r.lambda = 0.0;
    for (Matchup m : kMatchups) {
      r.lambda_by_matchup[index(m)] = rep.by_matchup[index(m)][p].lambda;
      r.lambda += r.lambda_by_matchup[index(m)];
    }
    r.games = static_cast<long long>(park_games[p].size());
    r.hr_per_game = r.games > 0 ? park_hr[p] / static_cast<double>(r.games) : 0.0;
    lambda[p] = r.lambda;
    hrg[p] = r.hr_per_game;
  }
  auto rl = rank_descending(lambda, parks);
  auto rh = rank_descending(hrg, parks);
  auto cl = cluster_marginals(lambda, cluster_threshold);
  for (std::size_t p = 0; p < np; ++p) {
    rep.marginals[p].rank_lambda = rl[p];
    rep.marginals[p].rank_hr_per_game = rh[p];
    rep.marginals[p].delta_rank = rh[p] - rl[p];
    rep.marginals[p].cluster = cl[p];
  }
  return rep;
}

double hrpf(const TeamHrTally& t) {
  if (t.home_games <= 0 || t.road_games <= 0) throw DataError("park factor needs home and road games");
  double road = static_cast<double>(t.road_hr_hit + t.road_hr_allowed) / static_cast<double>(t.road_games);
  if (road <= 0.0) throw DataError("park factor undefined: no road home runs");
  double home = static_cast<double>(t.home_hr_hit + t.home_hr_allowed) / static_cast<double>(t.home_games);
  return home / road;
}

std::vector<GameLine> game_lines(const ParseResult& parsed) {
  std::vector<GameLine> out;
  for (const auto& g : parsed.games) {
    GameLine l;
    l.game_id = g.header.game_id;
    l.season = parse_int(std::string_view(g.header.game_id).substr(3, 4));
    l.park = std::string(park_for_site(g.header.site));
    if (l.park.empty()) l.park = g.header.site.empty() ? g.header.home_team : g.header.site;
    l.home_team = g.header.home_team;
    l.visiting_team = g.header.visiting_team;
    l.home_hr = g.home_hr;
    l.visitor_hr = g.visitor_hr;
    out.push_back(std::move(l));
  }
  return out;
}

std::map<std::string, TeamHrTally> team_hr_tallies(const std::vector<GameLine>& games) {
  std::map<std::string, TeamHrTally> t;
  for (const auto& g : games) {
    auto& home = t[g.home_team];
    home.home_hr_hit += g.home_hr;
    home.home_hr_allowed += g.visitor_hr;
    home.home_games += 1;
    auto& road = t[g.visiting_team];
    road.road_hr_hit += g.visitor_hr;
    road.road_hr_allowed += g.home_hr;
    road.road_games += 1;
  }
  return t;
}

void write_games_csv(std::ostream& out, const std::vector<GameLine>& games) {
  out << "game_id,season,park,home,visitor,home_hr,visitor_hr\n";
  for (const auto& g : games)
    out << fmt::format("{},{},{},{},{},{},{}\n", g.game_id, g.season, g.park, g.home_team,
                       g.visiting_team, g.home_hr, g.visitor_hr);
}

std::vector<GameLine> parse_games_csv(std::string_view text) {
  std::vector<GameLine> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (n == 1) {
      if (line != "game_id,season,park,home,visitor,home_hr,visitor_hr")
        throw DataError("game table: unexpected header");
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 7) throw DataError(fmt::format("game table line {}: expected 7 fields", n));
    try {
      GameLine g{f[0], static_cast<int>(parse_int(f[1])), f[2], f[3], f[4],
                 static_cast<int>(parse_int(f[5])), static_cast<int>(parse_int(f[6]))};
      if (g.home_hr < 0 || g.visitor_hr < 0) throw DataError("negative home-run count");
      out.push_back(std::move(g));
    } catch (const DataError& e) {
      throw DataError(fmt::format("game table line {}: {}", n, e.what()));
    }
  }
  return out;
}

namespace {

template <class Row>
std::vector<const Row*> by_increasing_lambda(const std::vector<Row>& rows) {
  std::vector<const Row*> v;
  for (const auto& r : rows) v.push_back(&r);
  std::stable_sort(v.begin(), v.end(), [](const Row* a, const Row* b) {
    return a->rank_lambda > b->rank_lambda;
  });
  return v;
}

}  // namespace

void write_matchup_table_csv(std::ostream& out, const std::vector<ParkMatchupRow>& rows) {
  out << "park,zB,zP,z,rank_z,lambda,rank_lambda,hr_g,rank_hr_g,delta_rank\n";
  for (const auto* r : by_increasing_lambda(rows))
    out << fmt::format("{},{:.3f},{:.3f},{:.3f},{},{:.3f},{},{:.3f},{},{}\n", r->park, r->zb, r->zp,
                       r->z, r->rank_z, r->lambda, r->rank_lambda, r->hr_per_game,
                       r->rank_hr_per_game, r->delta_rank);
}

void write_marginal_table_csv(std::ostream& out, const std::vector<ParkMarginalRow>& rows) {
  out << "cluster,park,ll,lr,rl,rr,lambda,rank_lambda,hr_g,rank_hr_g,delta_rank\n";
  for (const auto* r : by_increasing_lambda(rows)) {
    const auto& l = r->lambda_by_matchup;
    out << fmt::format("{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{},{:.2f},{},{}\n", r->cluster,
                       r->park, l[0], l[1], l[2], l[3], r->lambda, r->rank_lambda, r->hr_per_game,
                       r->rank_hr_per_game, r->delta_rank);
  }
}

void write_matchup_averages_csv(std::ostream& out, const MatchupAverages& a) {
  out << "matchup,pa_per_game,zB,zP,games\n";
  for (Matchup m : kMatchups)
    out << fmt::format("{},{:.2f},{:.4f},{:.4f},{}\n", to_string(m), a[m].pa_per_game, a[m].zb,
                       a[m].zp, a[m].games);
}

void write_hrpf_csv(std::ostream& out, const std::map<std::string, TeamHrTally>& tallies) {
  out << "team,home_games,home_hr,road_games,road_hr,hrpf\n";
  for (const auto& [team, t] : tallies) {
    std::string value = "NA";
    if (t.home_games > 0 && t.road_games > 0 && t.road_hr_hit + t.road_hr_allowed > 0)
      value = fmt::format("{:.3f}", hrpf(t));
    out << fmt::format("{},{},{},{},{},{}\n", team, t.home_games, t.home_hr_hit + t.home_hr_allowed,
                       t.road_games, t.road_hr_hit + t.road_hr_allowed, value);
  }
}

std::string render_ecdf_svg(const std::vector<ParkMarginalRow>& rows) {
  constexpr double width = 720, height = 480, left = 60, right = 20, top = 20, bottom = 50;
  std::vector<const ParkMarginalRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->lambda < b->lambda; });
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height, width, height);
  if (sorted.empty()) return svg + "</svg>\n";
  double lo = sorted.front()->lambda, hi = sorted.back()->lambda;
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto x = [&](double v) { return left + (v - lo) / (hi - lo) * (width - left - right); };
  auto y = [&](double f) { return height - bottom - f * (height - top - bottom); };
  svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                     left, y(0), width - right, y(0));
  svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n",
                     left, y(0), left, y(1));
  svg += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"12\" text-anchor=\"middle\">marginal adjusted mean (HR/g)</text>\n",
      (left + width - right) / 2, height - 10);
  svg += fmt::format("<text x=\"15\" y=\"{:.1f}\" font-size=\"12\" transform=\"rotate(-90 15 {:.1f})\" "
                     "text-anchor=\"middle\">ECDF</text>\n",
                     (top + height - bottom) / 2, (top + height - bottom) / 2);
  const auto n = static_cast<double>(sorted.size());
  std::string path = fmt::format("M {:.1f} {:.1f}", x(lo), y(0));
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    double f0 = static_cast<double>(k) / n, f1 = static_cast<double>(k + 1) / n;
    double px = x(sorted[k]->lambda);
    path += fmt::format(" L {:.1f} {:.1f} L {:.1f} {:.1f}", px, y(f0), px, y(f1));
  }
  path += fmt::format(" L {:.1f} {:.1f}", x(hi), y(1));
  svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n", path);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    double px = x(sorted[k]->lambda), py = y(static_cast<double>(k + 1) / n);
    svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"steelblue\"/>\n", px, py);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"9\">{} ({})</text>\n", px + 4,
                       py - 3, sorted[k]->park, sorted[k]->cluster);
  }
  return svg + "</svg>\n";
}

}  // namespace parkfx
