// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutch/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string scale;
  std::string modes;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
  bool scale_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON configuration file");
  cmd->add_option("--seed", flags.seed, "Random seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--out", flags.out_dir, "Output directory")->each([&](const std::string&) {
    flags.out_set = true;
  });
  cmd->add_option("--modes", flags.modes, "Comma-separated mode counts");
  cmd->add_option("--scale", flags.scale, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->each([&](const std::string&) { flags.scale_set = true; });
}

cutch::ExperimentConfig load_config(const CommonFlags& flags, const std::string& experiment) {
  std::string text = "{}";
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::runtime_error("cannot open config " + flags.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  // Command-line flags override file values; the subcommand fixes the kind.
  auto cfg = cutch::ExperimentConfig::from_json_text(text);
  if (flags.scale_set) {
    std::string patched = "{\"scale\":\"" + flags.scale + "\"}";
    auto base = cutch::ExperimentConfig::from_json_text(patched);
    cfg.scale = base.scale;
    cfg.fom.n = base.fom.n;
    cfg.n_train = base.n_train;
    cfg.n_test = base.n_test;
  }
  {
    std::string patched = "{\"experiment\":\"" + experiment + "\"}";
    cfg.kind = cutch::ExperimentConfig::from_json_text(patched).kind;
    if (flags.config_path.empty() || text.find("\"bc\"") == std::string::npos) {
      cfg.fom.bc = cutch::ExperimentConfig::from_json_text(patched).fom.bc;
    }
  }
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.out_set) cfg.output_dir = flags.out_dir;
  if (!flags.modes.empty()) {
    cfg.mode_counts.clear();
    std::stringstream ss(flags.modes);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.mode_counts.push_back(std::stoi(item));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut finite element Cahn-Hilliard solver with a POD-Galerkin reduced model"};
  app.require_subcommand(1);

  CommonFlags flags;
  double compare_mu = 0.0;
  bool compare_mu_set = false;

  auto* cross = app.add_subcommand("cross-benchmark", "Cross-shaped initial data benchmark");
  auto* offline = app.add_subcommand("offline", "Collect snapshots and build the POD basis");
  auto* online = app.add_subcommand("online", "Reduced solves over the test set");
  auto* moving = app.add_subcommand("moving-circle", "Time-dependent embedded geometry study");
  auto* sweep = app.add_subcommand("condition-sweep", "Conditioning with and without ghost penalty");
  auto* compare = app.add_subcommand("compare", "FOM vs ROM for a single parameter");
  for (auto* cmd : {cross, offline, online, moving, sweep, compare}) add_common(cmd, flags);
  compare->add_option("--mu", compare_mu, "Embedded circle diameter")
      ->each([&](const std::string&) { compare_mu_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (cross->parsed()) {
      const auto report = cutch::cmd_cross_benchmark(load_config(flags, "cross_benchmark"));
      for (const auto& s : report.settings) {
        std::printf("setting %s: isoperimetric ratio %.4f -> %.4f, mass drift %.3e\n",
                    s.setting == cutch::CrossSetting::I ? "i" : "ii", s.initial_ratio,
                    s.final_ratio, s.max_mass_drift);
        std::printf("  diagnostics: %s\n  contour:     %s\n", s.diagnostics_csv.c_str(),
                    s.contour_csv.c_str());
      }
    } else if (offline->parsed()) {
      const auto report = cutch::cmd_offline(load_config(flags, "geo_neumann"));
      std::printf("offline: %d snapshots, rank u/w = %d/%d, %.2f s\n", report.n_snapshots,
                  report.rank_u, report.rank_w, report.offline_seconds);
      std::printf("  basis:       %s, %s\n", report.basis_u_path.c_str(),
                  report.basis_w_path.c_str());
      std::printf("  eigenvalues: %s\n", report.eigenvalues_csv.c_str());
    } else if (online->parsed()) {
      const auto report = cutch::cmd_online(load_config(flags, "geo_neumann"));
      std::printf("online over %zu test parameters (FOM %.3f s/param):\n",
                  report.test_mus.size(), report.fom_seconds_per_param);
      for (const auto& m : report.per_mode) {
        std::printf("  %3d modes: err_u %.5f  err_w %.5f  t_rb %.4f s  savings %.3f%%\n",
                    m.modes, m.mean_error_u, m.mean_error_w, m.rom_solver_seconds,
                    100.0 * m.savings);
      }
      std::printf("  tables: %s\n", report.errors_csv.c_str());
    } else if (moving->parsed()) {
      const auto report = cutch::cmd_moving_circle(load_config(flags, "moving_circle"));
      for (const auto& m : report.per_mode) {
        std::printf("  %3d modes: err_u %.5f  err_w %.5f\n", m.modes, m.mean_error_u,
                    m.mean_error_w);
      }
      std::printf("  full rank %d reproduces FOM to %.3e\n", report.full_rank,
                  report.full_rank_error_u);
    } else if (sweep->parsed()) {
      const auto report = cutch::cmd_condition_sweep(load_config(flags, "condition_sweep"));
      std::printf("condition sweep: stabilized max/min = %.2f, unstabilized exceeds max: %s\n",
                  report.stabilized_ratio,
                  report.unstabilized_exceeds_stabilized_max ? "yes" : "no");
      std::printf("  table: %s\n", report.csv.c_str());
    } else if (compare->parsed()) {
      auto cfg = load_config(flags, "geo_neumann");
      if (compare_mu_set) cfg.compare_mu = compare_mu;
      const auto report = cutch::cmd_compare(cfg);
      std::printf("compare mu=%.5f, %d modes: err_u %.5f err_w %.5f\n", report.mu, report.modes,
                  report.mean_error_u, report.mean_error_w);
      std::printf("  table: %s\n", report.csv.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
