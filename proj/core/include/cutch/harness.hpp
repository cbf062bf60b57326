// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "cutch/rom.hpp"
#include "cutch/snapshot_io.hpp"

namespace cutch {

enum class ExperimentKind {
  CrossBenchmark,
  GeoNeumann,
  GeoDirichlet,
  ExtendedRange,
  MovingCircle,
  ConditionSweep
};

struct ExperimentConfig {
  FomConfig fom;
  double train_lo = 0.36;
  double train_hi = 0.48;
  double test_lo = 0.40;
  double test_hi = 0.44;
  int n_train = 100;
  int n_test = 10;
  std::vector<int> record_steps;  // empty: {0..5} plus every 5th step
  std::vector<int> mode_counts;   // empty: {1, 5, 10, ..., 45}
  std::uint64_t seed = 1u;
  std::string output_dir = "out";
  ExperimentKind kind = ExperimentKind::GeoNeumann;
  InnerProduct inner_product = InnerProduct::MassWeighted;
  double ic_low = -0.05;
  double ic_high = 0.05;
  CrossSetting cross_setting = CrossSetting::II;
  std::string scale = "desk";  // desk | paper
  double compare_mu = 0.42;
  int compare_modes = 0;  // 0: use the largest configured mode count

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  void validate() const;

  std::vector<int> resolved_record_steps() const;
  std::vector<int> resolved_mode_counts() const;
};

// Level-contour area/perimeter of a P1 field; the area is the region where
// the field exceeds the level. The isoperimetric ratio 4*pi*A/P^2 equals 1
// for a full interior circle.
struct ContourMetrics {
  double area = 0.0;
  double perimeter = 0.0;
  double isoperimetric_ratio = 0.0;
};
ContourMetrics contour_metrics(const BackgroundMesh& mesh, const Eigen::VectorXd& field,
                               double level);

// count uniform draws in [lo, hi] from one SplitMix64 stream.
std::vector<double> sample_uniform(std::uint64_t stream_seed, double lo, double hi, int count);

// Normalized drift of a mass series against its initial value.
double mass_drift(const std::vector<double>& mass_series);

// --- Experiment commands ----------------------------------------------------

struct CrossSettingReport {
  CrossSetting setting = CrossSetting::II;
  double initial_ratio = 0.0;
  double final_ratio = 0.0;
  double max_mass_drift = 0.0;
  std::string diagnostics_csv;
  std::string contour_csv;
};
struct CrossBenchmarkReport {
  std::vector<CrossSettingReport> settings;
};
CrossBenchmarkReport cmd_cross_benchmark(const ExperimentConfig& cfg);

struct OfflineReport {
  std::vector<double> train_mus;
  int n_snapshots = 0;
  int rank_u = 0;
  int rank_w = 0;
  double offline_seconds = 0.0;
  std::string basis_u_path, basis_w_path;
  std::string snapshots_u_path, snapshots_w_path;
  std::string eigenvalues_csv;
  std::string manifest_path;
};
OfflineReport cmd_offline(const ExperimentConfig& cfg);

struct OnlineModeResult {
  int modes = 0;
  double mean_error_u = 0.0;
  double mean_error_w = 0.0;
  double rom_solver_seconds = 0.0;  // projection + reduced solves, per parameter
  double rom_total_seconds = 0.0;   // plus full-order assembly, per parameter
  double savings = 0.0;             // (t_fom - t_rb) / t_fom
  double mean_mass_error = 0.0;     // |m_rom - m_fom| / (1 + |m_fom|), averaged
};
struct OnlineReport {
  std::vector<double> test_mus;
  std::vector<OnlineModeResult> per_mode;
  std::vector<double> per_step_error_u;  // at the largest mode count
  std::vector<double> per_step_error_w;
  double fom_seconds_per_param = 0.0;
  double fom_solve_seconds_per_step = 0.0;
  double rom_dense_solve_seconds_per_step = 0.0;  // at the largest mode count
  std::string errors_csv, per_step_csv, timing_csv;
};
OnlineReport cmd_online(const ExperimentConfig& cfg);

struct MovingCircleReport {
  std::vector<OnlineModeResult> per_mode;
  int full_rank = 0;
  double full_rank_error_u = 0.0;
  std::string errors_csv;
};
MovingCircleReport cmd_moving_circle(const ExperimentConfig& cfg);

struct ConditionSweepEntry {
  double mu = 0.0;
  double stabilized = 0.0;
  double unstabilized = 0.0;  // +inf when the factorization fails
};
struct ConditionSweepReport {
  std::vector<ConditionSweepEntry> entries;
  double stabilized_ratio = 0.0;  // max/min over the sweep
  double stabilized_max = 0.0;
  bool unstabilized_exceeds_stabilized_max = false;
  std::string csv;
};
ConditionSweepReport cmd_condition_sweep(const ExperimentConfig& cfg);

struct CompareReport {
  double mu = 0.0;
  int modes = 0;
  double mean_error_u = 0.0;
  double mean_error_w = 0.0;
  std::string csv;
};
CompareReport cmd_compare(const ExperimentConfig& cfg);

}  // namespace cutch
