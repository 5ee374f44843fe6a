#include "parkfx/common.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/core.h>

namespace parkfx {

char to_char(Hand h) noexcept { return h == Hand::L ? 'L' : 'R'; }

std::string_view to_string(Matchup m) noexcept {
  static constexpr std::array<std::string_view, 4> names{"LL", "LR", "RL", "RR"};
  return names[index(m)];
}

Hand parse_hand(std::string_view s) {
  if (s == "L") return Hand::L;
  if (s == "R") return Hand::R;
  throw DataError(fmt::format("invalid hand '{}'", s));
}

Matchup parse_matchup(std::string_view s) {
  for (Matchup m : kMatchups)
    if (to_string(m) == s) return m;
  throw DataError(fmt::format("invalid matchup '{}'", s));
}

const std::vector<std::string>& canonical_parks() {
  static const std::vector<std::string> parks{
      "ANA", "ARI", "ATL", "BAL", "BOS", "CHA", "CHN", "CIN", "CLE", "COL",
      "DET", "HOU", "KCA", "LAN", "MIA", "MIL", "MIN", "NYA", "NYN", "OAK",
      "PHI", "PIT", "SDN", "SEA", "SFN", "SLN", "TBA", "TEX", "TOR", "WAS"};
  return parks;
}

std::optional<std::size_t> find_park(const std::vector<std::string>& parks,
                                     std::string_view park) {
  auto it = std::find(parks.begin(), parks.end(), park);
  if (it == parks.end()) return std::nullopt;
  return static_cast<std::size_t>(it - parks.begin());
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path,
                                                    std::vector<std::string>* header) {
  std::istringstream in(read_text_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (header) *header = split_csv_line(line);
      continue;
    }
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

double parse_double(std::string_view s) {
  // from_chars for double is missing in older libstdc++; strtod on a copy.
  std::string buf(s);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw DataError(fmt::format("invalid number '{}'", s));
  return v;
}

long long parse_int(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(fmt::format("invalid integer '{}'", s));
  return v;
}

std::vector<int> rank_descending(const std::vector<double>& values,
                                 const std::vector<std::string>& keys) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return keys[a] < keys[b];
  });
  std::vector<int> rank(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r) + 1;
  return rank;
}

}  // namespace parkfx
