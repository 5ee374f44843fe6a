#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parkfx/glmm.hpp"
#include "parkfx/study_config.hpp"

namespace parkfx {

/// Everything a command needs; empty input paths default to the files the
/// previous stage writes into the output directory.
struct PipelineConfig {
  std::string event_dir;
  std::string roster_dir;
  std::string out_dir = "out";
  std::string pa_table;
  std::string games_table;
  std::string observations;
  std::string model;
  std::string truth;
  std::string divisions;  // CSV park,division; empty for the built-in map

  StudyConfig study = StudyConfig::standard();
  FitOptions fit;
  std::string subset = "full";
  SeasonMode season_mode = SeasonMode::random;

  double bin_width = 0.2;
  long long min_bin_n = 30;
  double cluster_threshold = 0.085;

  std::uint64_t seed = 20100405;
  int sim_games = 81;
  double sim_sigma2 = 0.015;
  double sim_cv = 0.25;
  int sim_first_season = 2010;
  int sim_last_season = 2023;
  std::vector<int> sim_skip_seasons{2020};
};

/// File name stem for a subset label ("park,season" -> "park_season").
std::string model_stem(const std::string& label);

void cmd_ingest(const PipelineConfig& config);
void cmd_build(const PipelineConfig& config);
void cmd_fit(const PipelineConfig& config);
void cmd_adjust(const PipelineConfig& config);
void cmd_diagnose(const PipelineConfig& config);
void cmd_anova(const PipelineConfig& config);
void cmd_simulate(const PipelineConfig& config);
void cmd_recover(const PipelineConfig& config);
void cmd_hrpf(const PipelineConfig& config);

}  // namespace parkfx
