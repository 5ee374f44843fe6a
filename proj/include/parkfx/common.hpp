#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parkfx {

enum class Hand : std::uint8_t { L, R };

/// Batter/pitcher handedness pair, ordered as the tables print them.
enum class Matchup : std::uint8_t { LL = 0, LR = 1, RL = 2, RR = 3 };

inline constexpr std::array<Matchup, 4> kMatchups{Matchup::LL, Matchup::LR, Matchup::RL,
                                                  Matchup::RR};

constexpr Matchup make_matchup(Hand batter, Hand pitcher) noexcept {
  return static_cast<Matchup>((batter == Hand::R ? 2 : 0) + (pitcher == Hand::R ? 1 : 0));
}
constexpr Hand batter_hand(Matchup m) noexcept {
  return static_cast<int>(m) >= 2 ? Hand::R : Hand::L;
}
constexpr Hand pitcher_hand(Matchup m) noexcept {
  return (static_cast<int>(m) & 1) ? Hand::R : Hand::L;
}
constexpr std::size_t index(Matchup m) noexcept { return static_cast<std::size_t>(m); }

char to_char(Hand h) noexcept;
std::string_view to_string(Matchup m) noexcept;
Hand parse_hand(std::string_view s);
Matchup parse_matchup(std::string_view s);

// Errors. The CLI maps each family onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Bad or inconsistent input data (exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};
/// Bad invocation or configuration (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};
/// Optimizer failed to converge; carries the objective trajectory (exit code 4).
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> trajectory)
      : Error(what), trajectory_(std::move(trajectory)) {}
  const std::vector<double>& trajectory() const noexcept { return trajectory_; }

 private:
  std::vector<double> trajectory_;
};

/// The 30 current home-team codes, alphabetical. This is also the park
/// column order used by design matrices and reports.
const std::vector<std::string>& canonical_parks();

/// Position of `park` in `parks`, or nullopt.
std::optional<std::size_t> find_park(const std::vector<std::string>& parks, std::string_view park);

// Minimal comma-separated helpers; none of the emitted tables need quoting.
std::vector<std::string> split_csv_line(std::string_view line);
std::vector<std::vector<std::string>> read_csv_file(const std::string& path,
                                                    std::vector<std::string>* header);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

/// Strict numeric parsing (whole field must be consumed).
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// Rank values so that the largest gets rank 1. Ties go to the
/// lexicographically smaller key first.
std::vector<int> rank_descending(const std::vector<double>& values,
                                 const std::vector<std::string>& keys);

}  // namespace parkfx
