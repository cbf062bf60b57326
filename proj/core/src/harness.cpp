// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "cutch/rng.hpp"

namespace cutch {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CrossBenchmark: return "cross_benchmark";
    case ExperimentKind::GeoNeumann: return "geo_neumann";
    case ExperimentKind::GeoDirichlet: return "geo_dirichlet";
    case ExperimentKind::ExtendedRange: return "extended_range";
    case ExperimentKind::MovingCircle: return "moving_circle";
    case ExperimentKind::ConditionSweep: return "condition_sweep";
  }
  return "geo_neumann";
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "cross_benchmark") return ExperimentKind::CrossBenchmark;
  if (name == "geo_neumann") return ExperimentKind::GeoNeumann;
  if (name == "geo_dirichlet") return ExperimentKind::GeoDirichlet;
  if (name == "extended_range") return ExperimentKind::ExtendedRange;
  if (name == "moving_circle") return ExperimentKind::MovingCircle;
  if (name == "condition_sweep") return ExperimentKind::ConditionSweep;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

json geometry_to_json(const LevelSet& ls) {
  json j;
  if (ls.kind == LevelSet::Kind::FixedCircle) {
    j["kind"] = "fixed_circle";
    j["mu"] = ls.mu;
  } else {
    j["kind"] = "moving_circle";
    j["center0"] = {ls.center0.x(), ls.center0.y()};
    j["x0"] = ls.x0;
    j["mu_min"] = ls.mu_min;
    j["mu_max"] = ls.mu_max;
    j["delta"] = ls.delta;
    j["period"] = ls.period;
  }
  return j;
}

LevelSet geometry_from_json(const json& j) {
  const std::string kind = j.value("kind", "fixed_circle");
  if (kind == "fixed_circle") return LevelSet::fixed_circle(j.value("mu", 0.0));
  if (kind == "moving_circle") {
    Eigen::Vector2d center0(0.0, 0.1);
    if (j.contains("center0")) {
      center0 = {j["center0"][0].get<double>(), j["center0"][1].get<double>()};
    }
    return LevelSet::moving_circle(center0, j.value("x0", 0.0039), j.value("mu_min", 0.1),
                                   j.value("mu_max", 0.15), j.value("delta", 0.42),
                                   j.value("period", 1.0));
  }
  throw std::invalid_argument("unknown geometry kind: " + kind);
}

// CSV file whose first line carries the resolved configuration.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& provenance, const std::string& header)
      : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    out_ << "# " << provenance << "\n" << header << "\n";
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << fmt(values[i]);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

SparseMatrix inner_product_matrix(const BackgroundMesh& mesh, InnerProduct ip) {
  if (ip == InnerProduct::Euclidean) {
    SparseMatrix identity(mesh.n_vertices(), mesh.n_vertices());
    identity.setIdentity();
    return identity;
  }
  const CutClassification cls = classify(mesh, LevelSet::fixed_circle(0.0));
  const AssemblyContext ctx(mesh, cls);
  return assemble_mass(ctx);
}

SparseMatrix active_mass(const BackgroundMesh& mesh, const LevelSet& geometry, double time) {
  const CutClassification cls = classify(mesh, geometry, time);
  const AssemblyContext ctx(mesh, cls);
  return assemble_mass(ctx);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

std::vector<double> sample_uniform(std::uint64_t stream_seed, double lo, double hi, int count) {
  SplitMix64 rng(stream_seed);
  std::vector<double> values(count);
  for (int i = 0; i < count; ++i) values[i] = lo + (hi - lo) * rng.next_double();
  return values;
}

double mass_drift(const std::vector<double>& mass_series) {
  if (mass_series.empty()) return 0.0;
  const double m0 = mass_series.front();
  double drift = 0.0;
  for (double m : mass_series) drift = std::max(drift, std::abs(m - m0));
  return drift / (1.0 + std::abs(m0));
}

ContourMetrics contour_metrics(const BackgroundMesh& mesh, const Eigen::VectorXd& field,
                               double level) {
  ContourMetrics metrics;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const auto p = mesh.triangle_points(tri);
    const auto& v = mesh.triangles[tri].v;
    std::array<double, 3> f;
    for (int k = 0; k < 3; ++k) {
      f[k] = level - field[v[k]];  // {f < 0} is the super-level region
      if (std::abs(f[k]) < 1e-15) f[k] = -1e-15;
    }
    const auto poly = clip_triangle_negative(p, f);
    if (poly.size() >= 3) metrics.area += std::abs(polygon_area(poly));
    if (const auto seg = zero_segment(p, f)) {
      metrics.perimeter += (seg->second - seg->first).norm();
    }
  }
  if (metrics.perimeter > 1e-12) {
    metrics.isoperimetric_ratio =
        4.0 * M_PI * metrics.area / (metrics.perimeter * metrics.perimeter);
  }
  return metrics;
}

std::vector<int> ExperimentConfig::resolved_record_steps() const {
  if (!record_steps.empty()) return record_steps;
  std::vector<int> steps;
  for (int s = 0; s <= std::min(5, fom.n_steps); ++s) steps.push_back(s);
  for (int s = 10; s <= fom.n_steps; s += 5) steps.push_back(s);
  return steps;
}

std::vector<int> ExperimentConfig::resolved_mode_counts() const {
  if (!mode_counts.empty()) return mode_counts;
  std::vector<int> counts = {1};
  for (int m = 5; m <= 45; m += 5) counts.push_back(m);
  return counts;
}

void ExperimentConfig::validate() const {
  fom.validate();
  if (n_train < 1 || n_test < 0) throw std::invalid_argument("config: sample counts invalid");
  if (kind == ExperimentKind::GeoNeumann || kind == ExperimentKind::GeoDirichlet ||
      kind == ExperimentKind::ExtendedRange) {
    if (!(train_lo <= test_lo && test_hi <= train_hi)) {
      throw std::invalid_argument("config: test range must lie inside the train range");
    }
  }
  if (ic_low > ic_high) throw std::invalid_argument("config: ic range invalid");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.scale = j.value("scale", cfg.scale);
  if (cfg.scale == "paper") {
    cfg.fom.n = 48;
    cfg.n_train = 36;  // 36 runs x 25 recorded instants = 900 snapshot columns
    cfg.n_test = 30;
  } else if (cfg.scale == "desk") {
    cfg.fom.n = 24;
    cfg.n_train = 100;
    cfg.n_test = 10;
  } else {
    throw std::invalid_argument("config: scale must be desk or paper");
  }

  cfg.kind = kind_from_name(j.value("experiment", kind_name(cfg.kind)));
  cfg.fom.bc = (cfg.kind == ExperimentKind::GeoDirichlet ||
                cfg.kind == ExperimentKind::ExtendedRange ||
                cfg.kind == ExperimentKind::MovingCircle)
                   ? BcMode::DirichletEmbedded
                   : BcMode::Neumann;

  cfg.fom.n = j.value("mesh_n", cfg.fom.n);
  cfg.fom.eps = j.value("eps", cfg.fom.eps);
  if (j.contains("gamma")) {
    cfg.fom.well.g0 = j["gamma"][0].get<double>();
    cfg.fom.well.g1 = j["gamma"][1].get<double>();
    cfg.fom.well.g2 = j["gamma"][2].get<double>();
  }
  cfg.fom.alpha_n = j.value("alpha_n", cfg.fom.alpha_n);
  cfg.fom.alpha1 = j.value("alpha_1", cfg.fom.alpha1);
  cfg.fom.alpha_d = j.value("alpha_d", cfg.fom.alpha_d);
  cfg.fom.tau = j.value("tau", cfg.fom.tau);
  cfg.fom.n_steps = j.value("n_steps", cfg.fom.n_steps);
  if (j.contains("bc")) {
    const std::string bc = j["bc"].get<std::string>();
    if (bc == "neumann") cfg.fom.bc = BcMode::Neumann;
    else if (bc == "dirichlet_embedded") cfg.fom.bc = BcMode::DirichletEmbedded;
    else throw std::invalid_argument("config: unknown bc " + bc);
  }
  if (j.contains("gp_variant")) {
    const std::string gp = j["gp_variant"].get<std::string>();
    if (gp == "value_jump") cfg.fom.gp_variant = GhostVariant::ValueJump;
    else if (gp == "derivative_jump") cfg.fom.gp_variant = GhostVariant::DerivativeJump;
    else throw std::invalid_argument("config: unknown gp_variant " + gp);
  }
  cfg.fom.gp_on_w = j.value("gp_on_w", cfg.fom.gp_on_w);
  cfg.fom.solver_tol = j.value("solver_tol", cfg.fom.solver_tol);
  if (j.contains("geometry")) cfg.fom.geometry = geometry_from_json(j["geometry"]);

  if (j.contains("train_range")) {
    cfg.train_lo = j["train_range"][0].get<double>();
    cfg.train_hi = j["train_range"][1].get<double>();
  }
  if (j.contains("test_range")) {
    cfg.test_lo = j["test_range"][0].get<double>();
    cfg.test_hi = j["test_range"][1].get<double>();
  }
  cfg.n_train = j.value("n_train", cfg.n_train);
  cfg.n_test = j.value("n_test", cfg.n_test);
  if (j.contains("record_steps")) cfg.record_steps = j["record_steps"].get<std::vector<int>>();
  if (j.contains("mode_counts")) cfg.mode_counts = j["mode_counts"].get<std::vector<int>>();
  cfg.seed = j.value("seed", cfg.seed);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  if (j.contains("inner_product")) {
    const std::string ip = j["inner_product"].get<std::string>();
    if (ip == "mass_weighted") cfg.inner_product = InnerProduct::MassWeighted;
    else if (ip == "euclidean") cfg.inner_product = InnerProduct::Euclidean;
    else throw std::invalid_argument("config: unknown inner_product " + ip);
  }
  if (j.contains("ic_range")) {
    cfg.ic_low = j["ic_range"][0].get<double>();
    cfg.ic_high = j["ic_range"][1].get<double>();
  }
  if (j.contains("cross_setting")) {
    const std::string s = j["cross_setting"].get<std::string>();
    cfg.cross_setting = s == "i" ? CrossSetting::I : CrossSetting::II;
  }
  cfg.compare_mu = j.value("compare_mu", cfg.compare_mu);
  cfg.compare_modes = j.value("compare_modes", cfg.compare_modes);
  return cfg;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["experiment"] = kind_name(kind);
  j["scale"] = scale;
  j["mesh_n"] = fom.n;
  j["eps"] = fom.eps;
  j["gamma"] = {fom.well.g0, fom.well.g1, fom.well.g2};
  j["alpha_n"] = fom.alpha_n;
  j["alpha_1"] = fom.alpha1;
  j["alpha_d"] = fom.alpha_d;
  j["tau"] = fom.tau;
  j["n_steps"] = fom.n_steps;
  j["bc"] = fom.bc == BcMode::Neumann ? "neumann" : "dirichlet_embedded";
  j["gp_variant"] =
      fom.gp_variant == GhostVariant::ValueJump ? "value_jump" : "derivative_jump";
  j["gp_on_w"] = fom.gp_on_w;
  j["solver_tol"] = fom.solver_tol;
  j["geometry"] = geometry_to_json(fom.geometry);
  j["train_range"] = {train_lo, train_hi};
  j["test_range"] = {test_lo, test_hi};
  j["n_train"] = n_train;
  j["n_test"] = n_test;
  j["record_steps"] = resolved_record_steps();
  j["mode_counts"] = resolved_mode_counts();
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["inner_product"] =
      inner_product == InnerProduct::MassWeighted ? "mass_weighted" : "euclidean";
  j["ic_range"] = {ic_low, ic_high};
  j["cross_setting"] = cross_setting == CrossSetting::I ? "i" : "ii";
  j["compare_mu"] = compare_mu;
  j["compare_modes"] = compare_modes;
  return j.dump();
}

CrossBenchmarkReport cmd_cross_benchmark(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);
  const std::string provenance = cfg.to_json_text();

  CrossBenchmarkReport report;
  for (CrossSetting setting : {CrossSetting::I, CrossSetting::II}) {
    FomConfig f = cfg.fom;
    f.geometry = LevelSet::fixed_circle(0.0);
    f.bc = BcMode::Neumann;
    f.well = setting == CrossSetting::I ? DoubleWell{-1.0, 0.0, 1.0} : DoubleWell{2.0, 9.0, 4.0};
    const double high = setting == CrossSetting::I ? 0.95 : 0.6;
    const double low = setting == CrossSetting::I ? -0.95 : 0.0;
    const double level = 0.5 * (high + low);

    std::vector<int> contour_steps = {0};
    for (int k = 1; k <= 10; ++k) {
      const int s = f.n_steps * k / 10;
      if (s > contour_steps.back()) contour_steps.push_back(s);
    }

    const Eigen::VectorXd u0 = initial_cross(setting, mesh);
    const FomRunResult run = run_fom(mesh, f, u0, contour_steps);

    const std::string tag = setting == CrossSetting::I ? "i" : "ii";
    CrossSettingReport entry;
    entry.setting = setting;
    entry.diagnostics_csv = join_path(cfg.output_dir, "cross_" + tag + "_diagnostics.csv");
    entry.contour_csv = join_path(cfg.output_dir, "cross_" + tag + "_contour.csv");

    CsvWriter diag(entry.diagnostics_csv, provenance, "step,time,mass,energy,solve_seconds");
    std::vector<double> mass_series;
    for (const auto& d : run.diagnostics) {
      diag.row({static_cast<double>(d.step), d.time, d.mass, d.energy, d.solve_seconds});
      mass_series.push_back(d.mass);
    }
    entry.max_mass_drift = mass_drift(mass_series);

    CsvWriter contour(entry.contour_csv, provenance,
                      "step,time,area,perimeter,isoperimetric_ratio");
    for (const auto& state : run.recorded) {
      const ContourMetrics m = contour_metrics(mesh, state.u, level);
      contour.row({static_cast<double>(state.step_index), state.time, m.area, m.perimeter,
                   m.isoperimetric_ratio});
      if (state.step_index == 0) entry.initial_ratio = m.isoperimetric_ratio;
      entry.final_ratio = m.isoperimetric_ratio;
    }
    report.settings.push_back(std::move(entry));
  }
  return report;
}

OfflineReport cmd_offline(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);
  const Eigen::VectorXd u0 = initial_pseudorandom(cfg.seed, mesh, cfg.ic_low, cfg.ic_high);

  OfflineReport report;
  report.train_mus =
      sample_uniform(cfg.seed ^ kParameterStreamTag, cfg.train_lo, cfg.train_hi, cfg.n_train);

  auto [s_u, s_w] =
      collect_snapshots(mesh, cfg.fom, report.train_mus, cfg.resolved_record_steps(), u0);
  report.n_snapshots = s_u.cols();

  const SparseMatrix ip = inner_product_matrix(mesh, cfg.inner_product);
  const auto counts = cfg.resolved_mode_counts();
  const int n_r = *std::max_element(counts.begin(), counts.end());
  const PodBasis basis_u = pod(s_u, ip, std::min(n_r, s_u.cols()), cfg.inner_product);
  const PodBasis basis_w = pod(s_w, ip, std::min(n_r, s_w.cols()), cfg.inner_product);
  report.rank_u = basis_u.n_modes();
  report.rank_w = basis_w.n_modes();

  report.snapshots_u_path = join_path(cfg.output_dir, "snapshots_u.chsnap");
  report.snapshots_w_path = join_path(cfg.output_dir, "snapshots_w.chsnap");
  write_snapshots(report.snapshots_u_path, s_u);
  write_snapshots(report.snapshots_w_path, s_w);

  const auto basis_to_matrix = [](const PodBasis& basis, char field) {
    SnapshotMatrix m;
    m.data = basis.modes;
    m.field = field;
    m.meta.resize(basis.n_modes());
    for (int i = 0; i < basis.n_modes(); ++i) m.meta[i] = {basis.eigenvalues[i], i};
    return m;
  };
  report.basis_u_path = join_path(cfg.output_dir, "basis_u.chsnap");
  report.basis_w_path = join_path(cfg.output_dir, "basis_w.chsnap");
  write_snapshots(report.basis_u_path, basis_to_matrix(basis_u, 'u'));
  write_snapshots(report.basis_w_path, basis_to_matrix(basis_w, 'w'));

  report.eigenvalues_csv = join_path(cfg.output_dir, "eigenvalues.csv");
  CsvWriter eig(report.eigenvalues_csv, cfg.to_json_text(), "mode,lambda_u,lambda_w");
  for (int i = 0; i < basis_u.eigenvalues.size(); ++i) {
    eig.row({static_cast<double>(i + 1), basis_u.eigenvalues[i],
             i < basis_w.eigenvalues.size() ? basis_w.eigenvalues[i] : 0.0});
  }

  report.offline_seconds = seconds_since(start);

  report.manifest_path = join_path(cfg.output_dir, "offline_manifest.json");
  json manifest;
  manifest["config"] = json::parse(cfg.to_json_text());
  manifest["train_mus"] = report.train_mus;
  manifest["n_snapshots"] = report.n_snapshots;
  manifest["rank_u"] = report.rank_u;
  manifest["rank_w"] = report.rank_w;
  manifest["offline_seconds"] = report.offline_seconds;
  std::ofstream(report.manifest_path) << manifest.dump(2) << "\n";
  return report;
}

OnlineReport cmd_online(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);
  const Eigen::VectorXd u0 = initial_pseudorandom(cfg.seed, mesh, cfg.ic_low, cfg.ic_high);
  const SparseMatrix ip = inner_product_matrix(mesh, cfg.inner_product);

  const Eigen::MatrixXd basis_u =
      read_snapshots(join_path(cfg.output_dir, "basis_u.chsnap")).data;
  const Eigen::MatrixXd basis_w =
      read_snapshots(join_path(cfg.output_dir, "basis_w.chsnap")).data;

  OnlineReport report;
  report.test_mus =
      sample_uniform(cfg.seed ^ kTestParameterStreamTag, cfg.test_lo, cfg.test_hi, cfg.n_test);

  if (cfg.n_test < 1) throw std::invalid_argument("cmd_online: n_test must be >= 1");
  std::vector<int> counts = cfg.resolved_mode_counts();
  for (int& c : counts) c = std::min(c, static_cast<int>(basis_u.cols()));
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  const int max_count = counts.back();

  report.per_mode.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) report.per_mode[k].modes = counts[k];
  report.per_step_error_u.assign(cfg.fom.n_steps, 0.0);
  report.per_step_error_w.assign(cfg.fom.n_steps, 0.0);

  for (double mu : report.test_mus) {
    FomConfig f = cfg.fom;
    f.geometry = LevelSet::fixed_circle(mu);

    const FomRunResult fom = run_fom(mesh, f, u0, {});
    report.fom_seconds_per_param += fom.step_seconds;
    report.fom_solve_seconds_per_step += fom.solve_seconds / f.n_steps;

    std::vector<Eigen::VectorXd> fom_u, fom_w;
    std::vector<double> fom_mass;
    for (const State& s : fom.recorded) {
      if (s.step_index == 0) continue;
      fom_u.push_back(s.u);
      fom_w.push_back(s.w);
      fom_mass.push_back(fom.diagnostics[s.step_index].mass);
    }
    const SparseMatrix a_mu = active_mass(mesh, f.geometry, 0.0);

    for (std::size_t k = 0; k < counts.size(); ++k) {
      const int r = counts[k];
      const RomRunResult rom = run_rom(mesh, f, basis_u.leftCols(r), basis_w.leftCols(r), u0, ip);
      const ErrorSeries err_u = relative_error(fom_u, rom.lifted_u, a_mu);
      const ErrorSeries err_w = relative_error(fom_w, rom.lifted_w, a_mu);

      OnlineModeResult& slot = report.per_mode[k];
      slot.mean_error_u += err_u.mean;
      slot.mean_error_w += err_w.mean;
      slot.rom_solver_seconds += rom.projection_seconds + rom.reduced_seconds;
      slot.rom_total_seconds +=
          rom.projection_seconds + rom.reduced_seconds + rom.assembly_seconds;
      double mass_err = 0.0;
      for (std::size_t s = 0; s < rom.lifted_u.size(); ++s) {
        const double m_rom = compute_mass(rom.lifted_u[s], a_mu);
        mass_err += std::abs(m_rom - fom_mass[s]) / (1.0 + std::abs(fom_mass[s]));
      }
      slot.mean_mass_error += mass_err / static_cast<double>(rom.lifted_u.size());

      if (r == max_count) {
        for (int s = 0; s < cfg.fom.n_steps; ++s) {
          report.per_step_error_u[s] += err_u.per_step[s];
          report.per_step_error_w[s] += err_w.per_step[s];
        }
        report.rom_dense_solve_seconds_per_step += rom.dense_solve_seconds / f.n_steps;
      }
    }
  }

  const double inv_tests = 1.0 / static_cast<double>(cfg.n_test);
  report.fom_seconds_per_param *= inv_tests;
  report.fom_solve_seconds_per_step *= inv_tests;
  report.rom_dense_solve_seconds_per_step *= inv_tests;
  for (auto& slot : report.per_mode) {
    slot.mean_error_u *= inv_tests;
    slot.mean_error_w *= inv_tests;
    slot.rom_solver_seconds *= inv_tests;
    slot.rom_total_seconds *= inv_tests;
    slot.mean_mass_error *= inv_tests;
    slot.savings = (report.fom_seconds_per_param - slot.rom_solver_seconds) /
                   report.fom_seconds_per_param;
  }
  for (int s = 0; s < cfg.fom.n_steps; ++s) {
    report.per_step_error_u[s] *= inv_tests;
    report.per_step_error_w[s] *= inv_tests;
  }

  const std::string provenance = cfg.to_json_text();
  report.errors_csv = join_path(cfg.output_dir, "online_errors.csv");
  CsvWriter errors(report.errors_csv, provenance,
                   "modes,mean_error_u,mean_error_w,rom_solver_seconds,rom_total_seconds,"
                   "savings,mean_mass_error");
  for (const auto& slot : report.per_mode) {
    errors.row({static_cast<double>(slot.modes), slot.mean_error_u, slot.mean_error_w,
                slot.rom_solver_seconds, slot.rom_total_seconds, slot.savings,
                slot.mean_mass_error});
  }

  report.per_step_csv = join_path(cfg.output_dir, "online_errors_per_step.csv");
  CsvWriter per_step(report.per_step_csv, provenance, "step,error_u,error_w");
  for (int s = 0; s < cfg.fom.n_steps; ++s) {
    per_step.row({static_cast<double>(s + 1), report.per_step_error_u[s],
                  report.per_step_error_w[s]});
  }

  report.timing_csv = join_path(cfg.output_dir, "online_timing.csv");
  CsvWriter timing(report.timing_csv, provenance,
                   "fom_seconds_per_param,fom_solve_seconds_per_step,"
                   "rom_dense_solve_seconds_per_step");
  timing.row({report.fom_seconds_per_param, report.fom_solve_seconds_per_step,
              report.rom_dense_solve_seconds_per_step});
  return report;
}

MovingCircleReport cmd_moving_circle(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);

  FomConfig f = cfg.fom;
  f.bc = BcMode::DirichletEmbedded;
  if (f.geometry.kind != LevelSet::Kind::MovingCircle) {
    f.geometry = LevelSet::moving_circle({0.0, 0.1}, 0.0039, 0.1, 0.15, 0.42,
                                         f.n_steps * f.tau);
  }
  const Eigen::VectorXd u0 = initial_pseudorandom(cfg.seed, mesh, cfg.ic_low, cfg.ic_high);

  // Train on the full trajectory (initial state included so that the
  // full-rank basis spans the whole reduced dynamics).
  const FomRunResult fom = run_fom(mesh, f, u0, {});
  SnapshotMatrix s_u, s_w;
  s_u.field = 'u';
  s_w.field = 'w';
  const int cols = static_cast<int>(fom.recorded.size());
  s_u.data.resize(mesh.n_vertices(), cols);
  s_w.data.resize(mesh.n_vertices(), cols);
  for (int c = 0; c < cols; ++c) {
    s_u.data.col(c) = fom.recorded[c].u;
    s_w.data.col(c) = fom.recorded[c].w;
    s_u.meta.push_back({f.geometry.delta, fom.recorded[c].step_index});
    s_w.meta.push_back({f.geometry.delta, fom.recorded[c].step_index});
  }

  const SparseMatrix ip = inner_product_matrix(mesh, cfg.inner_product);
  const PodBasis basis_u = pod(s_u, ip, cols, cfg.inner_product);
  const PodBasis basis_w = pod(s_w, ip, cols, cfg.inner_product);
  const int rank = std::min(basis_u.n_modes(), basis_w.n_modes());

  MovingCircleReport report;
  report.full_rank = rank;

  std::vector<int> counts = cfg.mode_counts;
  if (counts.empty()) {
    for (int m = 1; m <= std::min(11, rank); ++m) counts.push_back(m);
  }
  if (std::find(counts.begin(), counts.end(), rank) == counts.end()) counts.push_back(rank);
  for (int& c : counts) c = std::min(c, rank);

  // Per-step masses of the moving geometry for the error norms.
  std::vector<SparseMatrix> masses;
  masses.reserve(f.n_steps);
  for (int s = 1; s <= f.n_steps; ++s) {
    masses.push_back(active_mass(mesh, f.geometry, s * f.tau));
  }
  std::vector<Eigen::VectorXd> fom_u, fom_w;
  for (const State& s : fom.recorded) {
    if (s.step_index == 0) continue;
    fom_u.push_back(s.u);
    fom_w.push_back(s.w);
  }

  const std::string provenance = cfg.to_json_text();
  report.errors_csv = join_path(cfg.output_dir, "moving_circle_errors.csv");
  CsvWriter errors(report.errors_csv, provenance,
                   "modes,mean_error_u,mean_error_w,rom_solver_seconds,rom_total_seconds");
  for (int r : counts) {
    const RomRunResult rom =
        run_rom(mesh, f, basis_u.leading(r), basis_w.leading(r), u0, ip);
    double sum_u = 0.0, sum_w = 0.0;
    for (int s = 0; s < f.n_steps; ++s) {
      const Eigen::VectorXd du = fom_u[s] - rom.lifted_u[s];
      const Eigen::VectorXd dw = fom_w[s] - rom.lifted_w[s];
      const auto& m = masses[s];
      const double nu = std::sqrt(std::max(0.0, fom_u[s].dot((m * fom_u[s]).eval())));
      const double nw = std::sqrt(std::max(0.0, fom_w[s].dot((m * fom_w[s]).eval())));
      const double eu = std::sqrt(std::max(0.0, du.dot((m * du).eval())));
      const double ew = std::sqrt(std::max(0.0, dw.dot((m * dw).eval())));
      sum_u += nu < 1e-14 ? eu : eu / nu;
      sum_w += nw < 1e-14 ? ew : ew / nw;
    }
    OnlineModeResult slot;
    slot.modes = r;
    slot.mean_error_u = sum_u / f.n_steps;
    slot.mean_error_w = sum_w / f.n_steps;
    slot.rom_solver_seconds = rom.projection_seconds + rom.reduced_seconds;
    slot.rom_total_seconds = slot.rom_solver_seconds + rom.assembly_seconds;
    errors.row({static_cast<double>(slot.modes), slot.mean_error_u, slot.mean_error_w,
                slot.rom_solver_seconds, slot.rom_total_seconds});
    if (r == rank) report.full_rank_error_u = slot.mean_error_u;
    report.per_mode.push_back(std::move(slot));
  }
  return report;
}

ConditionSweepReport cmd_condition_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);

  ConditionSweepReport report;
  const int n_sweep = 20;
  double stab_min = std::numeric_limits<double>::infinity();
  double stab_max = 0.0;
  bool exceeds = false;

  for (int i = 0; i < n_sweep; ++i) {
    ConditionSweepEntry entry;
    entry.mu = cfg.test_lo + (cfg.test_hi - cfg.test_lo) * i / (n_sweep - 1.0);
    FomConfig f = cfg.fom;
    f.geometry = LevelSet::fixed_circle(entry.mu);

    const ImexSystem stabilized(mesh, f, 0.0);
    entry.stabilized = stabilized.condition_estimate();

    FomConfig f0 = f;
    f0.alpha1 = 0.0;
    try {
      const ImexSystem unstabilized(mesh, f0, 0.0);
      entry.unstabilized = unstabilized.condition_estimate();
    } catch (const std::exception&) {
      entry.unstabilized = std::numeric_limits<double>::infinity();
    }

    stab_min = std::min(stab_min, entry.stabilized);
    stab_max = std::max(stab_max, entry.stabilized);
    report.entries.push_back(entry);
  }
  for (const auto& entry : report.entries) {
    if (entry.unstabilized > stab_max) exceeds = true;
  }
  report.stabilized_ratio = stab_max / stab_min;
  report.stabilized_max = stab_max;
  report.unstabilized_exceeds_stabilized_max = exceeds;

  report.csv = join_path(cfg.output_dir, "condition_sweep.csv");
  CsvWriter csv(report.csv, cfg.to_json_text(), "mu,cond_stabilized,cond_unstabilized");
  for (const auto& entry : report.entries) {
    csv.row({entry.mu, entry.stabilized, entry.unstabilized});
  }
  return report;
}

CompareReport cmd_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  const BackgroundMesh mesh = build_background_mesh(cfg.fom.n);
  const Eigen::VectorXd u0 = initial_pseudorandom(cfg.seed, mesh, cfg.ic_low, cfg.ic_high);
  const SparseMatrix ip = inner_product_matrix(mesh, cfg.inner_product);

  const Eigen::MatrixXd basis_u =
      read_snapshots(join_path(cfg.output_dir, "basis_u.chsnap")).data;
  const Eigen::MatrixXd basis_w =
      read_snapshots(join_path(cfg.output_dir, "basis_w.chsnap")).data;

  CompareReport report;
  report.mu = cfg.compare_mu;
  const auto counts = cfg.resolved_mode_counts();
  report.modes = cfg.compare_modes > 0 ? cfg.compare_modes : counts.back();
  report.modes = std::min(report.modes, static_cast<int>(basis_u.cols()));

  FomConfig f = cfg.fom;
  f.geometry = LevelSet::fixed_circle(report.mu);
  const FomRunResult fom = run_fom(mesh, f, u0, {});
  std::vector<Eigen::VectorXd> fom_u, fom_w;
  for (const State& s : fom.recorded) {
    if (s.step_index == 0) continue;
    fom_u.push_back(s.u);
    fom_w.push_back(s.w);
  }

  const RomRunResult rom = run_rom(mesh, f, basis_u.leftCols(report.modes),
                                   basis_w.leftCols(report.modes), u0, ip);
  const SparseMatrix a_mu = active_mass(mesh, f.geometry, 0.0);
  const ErrorSeries err_u = relative_error(fom_u, rom.lifted_u, a_mu);
  const ErrorSeries err_w = relative_error(fom_w, rom.lifted_w, a_mu);
  report.mean_error_u = err_u.mean;
  report.mean_error_w = err_w.mean;

  report.csv = join_path(cfg.output_dir, "compare.csv");
  CsvWriter csv(report.csv, cfg.to_json_text(), "step,error_u,error_w");
  for (int s = 0; s < f.n_steps; ++s) {
    csv.row({static_cast<double>(s + 1), err_u.per_step[s], err_w.per_step[s]});
  }
  return report;
}

}  // namespace cutch
