// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/rom.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace cutch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::MatrixXd weighted(const SnapshotMatrix& snapshots, const SparseMatrix& mass,
                         InnerProduct ip) {
  if (ip == InnerProduct::Euclidean) return snapshots.data;
  return mass * snapshots.data;
}

}  // namespace

PodBasis pod(const SnapshotMatrix& snapshots, const SparseMatrix& mass, int n_r,
             InnerProduct inner_product) {
  const int n_s = snapshots.cols();
  if (n_s < 1 || snapshots.data.norm() == 0.0) {
    throw std::invalid_argument("pod: snapshot matrix is empty or zero");
  }
  if (n_r < 1) throw std::invalid_argument("pod: n_r must be >= 1");

  const Eigen::MatrixXd weighted_snaps = weighted(snapshots, mass, inner_product);
  Eigen::MatrixXd corr = snapshots.data.transpose() * weighted_snaps;
  corr = ((corr + corr.transpose()) * (0.5 / n_s)).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.info() != Eigen::Success) throw std::runtime_error("pod: eigensolver failed");

  // Eigen returns ascending eigenvalues; flip to descending.
  const Eigen::VectorXd all_values = eig.eigenvalues().reverse();
  const double lambda_max = all_values[0];
  int rank = 0;
  while (rank < n_s && all_values[rank] > 1e-14 * lambda_max) ++rank;

  if (n_r > rank) {
    std::cerr << "pod: requested " << n_r << " modes, clamping to numerical rank " << rank
              << "\n";
    n_r = rank;
  }

  PodBasis basis;
  basis.inner_product = inner_product;
  basis.eigenvalues = all_values;
  basis.modes.resize(snapshots.rows(), n_r);
  for (int i = 0; i < n_r; ++i) {
    const Eigen::VectorXd q = eig.eigenvectors().col(n_s - 1 - i);
    basis.modes.col(i) = snapshots.data * q / (n_s * std::sqrt(all_values[i]));
  }

  // Re-orthonormalize in the declared inner product (two MGS sweeps).
  const auto ip_dot = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (inner_product == InnerProduct::Euclidean) return x.dot(y);
    return x.dot((mass * y).eval());
  };
  for (int i = 0; i < n_r; ++i) {
    Eigen::VectorXd v = basis.modes.col(i);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (int j = 0; j < i; ++j) {
        v -= ip_dot(basis.modes.col(j), v) * basis.modes.col(j);
      }
    }
    const double norm = std::sqrt(ip_dot(v, v));
    if (norm < 1e-300) throw std::runtime_error("pod: rank collapse during orthonormalization");
    basis.modes.col(i) = v / norm;
  }
  return basis;
}

std::pair<SnapshotMatrix, SnapshotMatrix> collect_snapshots(const BackgroundMesh& mesh,
                                                            const FomConfig& base_cfg,
                                                            const std::vector<double>& train_mus,
                                                            const std::vector<int>& record_steps,
                                                            const Eigen::VectorXd& u0) {
  SnapshotMatrix s_u, s_w;
  s_u.field = 'u';
  s_w.field = 'w';
  const int per_run = static_cast<int>(record_steps.empty()
                                           ? static_cast<std::size_t>(base_cfg.n_steps) + 1
                                           : record_steps.size());
  const int n_cols = per_run * static_cast<int>(train_mus.size());
  s_u.data.resize(mesh.n_vertices(), n_cols);
  s_w.data.resize(mesh.n_vertices(), n_cols);
  s_u.meta.resize(n_cols);
  s_w.meta.resize(n_cols);

  int col = 0;
  for (double mu : train_mus) {
    FomConfig cfg = base_cfg;
    cfg.geometry = LevelSet::fixed_circle(mu);
    FomRunResult run;
    try {
      run = run_fom(mesh, cfg, u0, record_steps);
    } catch (const std::exception& e) {
      throw std::runtime_error("collect_snapshots: FOM failed for mu=" + std::to_string(mu) +
                               ": " + e.what());
    }
    for (const State& state : run.recorded) {
      s_u.data.col(col) = state.u;
      s_w.data.col(col) = state.w;
      s_u.meta[col] = {mu, state.step_index};
      s_w.meta[col] = {mu, state.step_index};
      ++col;
    }
  }
  s_u.data.conservativeResize(Eigen::NoChange, col);
  s_w.data.conservativeResize(Eigen::NoChange, col);
  s_u.meta.resize(col);
  s_w.meta.resize(col);
  return {std::move(s_u), std::move(s_w)};
}

ReducedOperators project_operators(const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                                   const OperatorSet& ops, const FomConfig& cfg) {
  if (basis_u.rows() != ops.mass.rows() || basis_w.rows() != ops.mass.rows()) {
    throw std::invalid_argument("project_operators: basis/operator dimension mismatch");
  }
  ReducedOperators red;
  red.r_u = static_cast<int>(basis_u.cols());
  red.r_w = static_cast<int>(basis_w.cols());
  const double tau = cfg.tau;
  const double eps2 = cfg.eps * cfg.eps;

  const Eigen::MatrixXd a_bu = ops.mass * basis_u;
  red.mass_uu = basis_u.transpose() * a_bu;

  Eigen::MatrixXd b11 = red.mass_uu + tau * (basis_u.transpose() *
                                             ((ops.nitsche_flux + ops.ghost) * basis_u));
  Eigen::MatrixXd b12 =
      tau * (basis_u.transpose() * ((ops.stiffness + ops.dirichlet_w) * basis_w));
  Eigen::MatrixXd b21 =
      basis_w.transpose() * ((eps2 * ops.stiffness + ops.dirichlet_u) * basis_u);
  SparseMatrix w_block = ops.mass;
  if (cfg.gp_on_w) w_block = w_block + ops.ghost;
  Eigen::MatrixXd b22 = -(basis_w.transpose() * (w_block * basis_w));

  red.system.resize(red.r_u + red.r_w, red.r_u + red.r_w);
  red.system.topLeftCorner(red.r_u, red.r_u) = b11;
  red.system.topRightCorner(red.r_u, red.r_w) = b12;
  red.system.bottomLeftCorner(red.r_w, red.r_u) = b21;
  red.system.bottomRightCorner(red.r_w, red.r_w) = b22;
  red.lu = Eigen::PartialPivLU<Eigen::MatrixXd>(red.system);

  red.load_u = basis_u.transpose() * ops.load_v;
  red.load_q = basis_w.transpose() * ops.load_q;
  return red;
}

RomState rom_step(const RomState& state, const ReducedOperators& red,
                  const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                  const AssemblyContext& ctx, const FomConfig& cfg) {
  const Eigen::VectorXd u_lift = basis_u * state.a;
  const Eigen::VectorXd nonlinear = assemble_nonlinear_load(ctx, u_lift, cfg.well, cfg.eps);

  Eigen::VectorXd rhs(red.r_u + red.r_w);
  rhs.head(red.r_u) = red.mass_uu * state.a + cfg.tau * red.load_u;
  rhs.tail(red.r_w) = -(basis_w.transpose() * nonlinear) + red.load_q;

  const Eigen::VectorXd x = red.lu.solve(rhs);
  RomState next;
  next.a = x.head(red.r_u);
  next.b = x.tail(red.r_w);
  next.step_index = state.step_index + 1;
  next.time = state.time + cfg.tau;
  return next;
}

Eigen::VectorXd project_initial(const Eigen::VectorXd& u0, const Eigen::MatrixXd& basis_u,
                                const SparseMatrix& ip_matrix) {
  const Eigen::MatrixXd m_basis = ip_matrix * basis_u;
  const Eigen::MatrixXd gram = basis_u.transpose() * m_basis;
  const Eigen::VectorXd rhs = m_basis.transpose() * u0;
  return gram.ldlt().solve(rhs);
}

ErrorSeries relative_error(const std::vector<Eigen::VectorXd>& reference,
                           const std::vector<Eigen::VectorXd>& reduced,
                           const SparseMatrix& mass) {
  if (reference.size() != reduced.size()) {
    throw std::invalid_argument("relative_error: trajectory length mismatch");
  }
  ErrorSeries series;
  series.per_step.reserve(reference.size());
  double total = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    const Eigen::VectorXd diff = reference[k] - reduced[k];
    const double num = std::sqrt(std::max(0.0, diff.dot((mass * diff).eval())));
    const double den = std::sqrt(std::max(0.0, reference[k].dot((mass * reference[k]).eval())));
    const double e = den < 1e-14 ? num : num / den;
    series.per_step.push_back(e);
    total += e;
  }
  series.mean = reference.empty() ? 0.0 : total / static_cast<double>(reference.size());
  return series;
}

RomRunResult run_rom(const BackgroundMesh& mesh, const FomConfig& cfg,
                     const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                     const Eigen::VectorXd& u0, const SparseMatrix& ip_matrix) {
  RomRunResult result;
  const bool moving = cfg.geometry.kind == LevelSet::Kind::MovingCircle;

  auto assembly_start = Clock::now();
  CutClassification cls = classify(mesh, cfg.geometry, 0.0);
  auto ctx = std::make_unique<AssemblyContext>(mesh, cls);
  OperatorSet ops = assemble_operators(*ctx, cfg.assembly_parameters());
  result.assembly_seconds += seconds_since(assembly_start);

  auto projection_start = Clock::now();
  ReducedOperators red = project_operators(basis_u, basis_w, ops, cfg);
  result.projection_seconds += seconds_since(projection_start);

  RomState state;
  Eigen::VectorXd u0_restricted = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int dof : cls.active_dofs) u0_restricted[dof] = u0[dof];
  state.a = project_initial(u0_restricted, basis_u, ip_matrix);
  state.b = Eigen::VectorXd::Zero(basis_w.cols());

  result.lifted_u.reserve(cfg.n_steps);
  result.lifted_w.reserve(cfg.n_steps);
  for (int step = 1; step <= cfg.n_steps; ++step) {
    if (moving) {
      assembly_start = Clock::now();
      cls = classify(mesh, cfg.geometry, step * cfg.tau);
      ctx = std::make_unique<AssemblyContext>(mesh, cls);
      ops = assemble_operators(*ctx, cfg.assembly_parameters());
      result.assembly_seconds += seconds_since(assembly_start);
      projection_start = Clock::now();
      red = project_operators(basis_u, basis_w, ops, cfg);
      result.projection_seconds += seconds_since(projection_start);
    }

    assembly_start = Clock::now();
    const Eigen::VectorXd u_lift = basis_u * state.a;
    const Eigen::VectorXd nonlinear = assemble_nonlinear_load(*ctx, u_lift, cfg.well, cfg.eps);
    result.assembly_seconds += seconds_since(assembly_start);

    const auto reduced_start = Clock::now();
    Eigen::VectorXd rhs(red.r_u + red.r_w);
    rhs.head(red.r_u) = red.mass_uu * state.a + cfg.tau * red.load_u;
    rhs.tail(red.r_w) = -(basis_w.transpose() * nonlinear) + red.load_q;
    const auto solve_start = Clock::now();
    const Eigen::VectorXd x = red.lu.solve(rhs);
    result.dense_solve_seconds += seconds_since(solve_start);
    state.a = x.head(red.r_u);
    state.b = x.tail(red.r_w);
    state.step_index = step;
    state.time = step * cfg.tau;
    result.reduced_seconds += seconds_since(reduced_start);

    result.lifted_u.push_back(basis_u * state.a);
    result.lifted_w.push_back(basis_w * state.b);
  }
  return result;
}

}  // namespace cutch
