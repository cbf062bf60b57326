// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/fom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutch/rng.hpp"

namespace cutch {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void FomConfig::validate() const {
  if (well.g2 <= 0.0) throw std::invalid_argument("FomConfig: gamma_2 must be positive");
  if (eps <= 0.0) throw std::invalid_argument("FomConfig: eps must be positive");
  if (tau <= 0.0) throw std::invalid_argument("FomConfig: tau must be positive");
  if (n < 1) throw std::invalid_argument("FomConfig: mesh subdivisions must be >= 1");
  if (n_steps < 0) throw std::invalid_argument("FomConfig: n_steps must be >= 0");
}

double compute_mass(const Eigen::VectorXd& u, const SparseMatrix& mass) {
  return (mass * u).sum();
}

double compute_energy(const BackgroundMesh& mesh, const CutClassification& cls,
                      const Eigen::VectorXd& u, const DoubleWell& well, double eps) {
  return compute_energy(AssemblyContext(mesh, cls, 6, 3), u, well, eps);
}

double compute_energy(const AssemblyContext& ctx, const Eigen::VectorXd& u,
                      const DoubleWell& well, double eps) {
  double energy = 0.0;
  for (const auto& el : ctx.elements()) {
    const double u0 = u[el.dofs[0]], u1 = u[el.dofs[1]], u2 = u[el.dofs[2]];
    const Eigen::Vector2d grad =
        u0 * el.basis.grad[0] + u1 * el.basis.grad[1] + u2 * el.basis.grad[2];
    const double grad_term = 0.5 * eps * eps * grad.squaredNorm();
    for (std::size_t q = 0; q < el.volume.size(); ++q) {
      const auto& shp = el.volume_shape[q];
      const double uq = u0 * shp[0] + u1 * shp[1] + u2 * shp[2];
      energy += el.volume.weights[q] * (well.f(uq) + grad_term);
    }
  }
  return energy;
}

Eigen::VectorXd initial_cross(CrossSetting setting, const BackgroundMesh& mesh) {
  const double high = setting == CrossSetting::I ? 0.95 : 0.6;
  const double low = setting == CrossSetting::I ? -0.95 : 0.0;
  Eigen::VectorXd u(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double dx = mesh.vertices[v].x() - 0.5;
    const double dy = mesh.vertices[v].y() - 0.5;
    const bool arm1 = 5.0 * std::abs(dy - 0.4 * dx) + std::abs(0.4 * dx - dy) <= 1.0;
    const bool arm2 = 5.0 * std::abs(dx - 0.4 * dy) + std::abs(0.4 * dy - dx) <= 1.0;
    u[v] = (arm1 || arm2) ? high : low;
  }
  return u;
}

Eigen::VectorXd initial_pseudorandom(std::uint64_t seed, const BackgroundMesh& mesh, double low,
                                     double high) {
  if (low > high) throw std::invalid_argument("initial_pseudorandom: low must be <= high");
  SplitMix64 rng(seed);
  Eigen::VectorXd u(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) u[v] = low + (high - low) * rng.next_double();
  return u;
}

ImexSystem::ImexSystem(const BackgroundMesh& mesh, const FomConfig& cfg, double time)
    : mesh_(&mesh), cfg_(cfg), cls_(classify(mesh, cfg.geometry, time)) {
  cfg_.validate();
  ctx_ = std::make_unique<AssemblyContext>(mesh, cls_);
  ops_ = assemble_operators(*ctx_, cfg_.assembly_parameters());
  ops_.mu = cfg.geometry.kind == LevelSet::Kind::FixedCircle ? cfg.geometry.mu
                                                             : cfg.geometry.delta;
  ops_.time = time;

  n_active_ = static_cast<int>(cls_.active_dofs.size());
  if (n_active_ == 0) throw std::runtime_error("ImexSystem: no active degrees of freedom");

  std::vector<int> compact(mesh.n_vertices(), -1);
  for (int k = 0; k < n_active_; ++k) compact[cls_.active_dofs[k]] = k;

  const auto restrict_to_active = [&](const SparseMatrix& m) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(m.nonZeros());
    for (int col = 0; col < m.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        const int r = compact[it.row()], c = compact[it.col()];
        if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
      }
    }
    SparseMatrix out(n_active_, n_active_);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
  };

  mass_active_ = restrict_to_active(ops_.mass);
  const SparseMatrix stiff = restrict_to_active(ops_.stiffness);
  const SparseMatrix flux = restrict_to_active(ops_.nitsche_flux);
  const SparseMatrix ghost = restrict_to_active(ops_.ghost);
  const SparseMatrix dir_u = restrict_to_active(ops_.dirichlet_u);
  const SparseMatrix dir_w = restrict_to_active(ops_.dirichlet_w);

  const double tau = cfg_.tau;
  const double eps2 = cfg_.eps * cfg_.eps;
  SparseMatrix b11 = mass_active_ + tau * (flux + ghost);
  SparseMatrix b12 = tau * (stiff + dir_w);
  SparseMatrix b21 = eps2 * stiff + dir_u;
  SparseMatrix b22 = -mass_active_;
  if (cfg_.gp_on_w) b22 = b22 - ghost;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(b11.nonZeros() + b12.nonZeros() + b21.nonZeros() + b22.nonZeros());
  const auto append_block = [&](const SparseMatrix& m, int row0, int col0) {
    for (int col = 0; col < m.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        triplets.emplace_back(row0 + static_cast<int>(it.row()), col0 + col, it.value());
      }
    }
  };
  append_block(b11, 0, 0);
  append_block(b12, 0, n_active_);
  append_block(b21, n_active_, 0);
  append_block(b22, n_active_, n_active_);
  system_.resize(2 * n_active_, 2 * n_active_);
  system_.setFromTriplets(triplets.begin(), triplets.end());
  system_.makeCompressed();

  solver_.compute(system_);
  if (solver_.info() != Eigen::Success) {
    throw std::runtime_error("ImexSystem: sparse factorization failed (t=" +
                             std::to_string(time) + ")");
  }

  load_v_active_ = gather(ops_.load_v);
  load_q_active_ = gather(ops_.load_q);
}

Eigen::VectorXd ImexSystem::gather(const Eigen::VectorXd& full) const {
  Eigen::VectorXd compact(n_active_);
  for (int k = 0; k < n_active_; ++k) compact[k] = full[cls_.active_dofs[k]];
  return compact;
}

void ImexSystem::scatter(const Eigen::VectorXd& compact, Eigen::VectorXd& full) const {
  full.setZero();
  for (int k = 0; k < n_active_; ++k) full[cls_.active_dofs[k]] = compact[k];
}

State ImexSystem::step(const State& state) const {
  const Eigen::VectorXd u_active = gather(state.u);
  const Eigen::VectorXd nonlinear =
      gather(assemble_nonlinear_load(*ctx_, state.u, cfg_.well, cfg_.eps));

  Eigen::VectorXd rhs(2 * n_active_);
  rhs.head(n_active_) = mass_active_ * u_active + cfg_.tau * load_v_active_;
  rhs.tail(n_active_) = -nonlinear + load_q_active_;

  const auto start = Clock::now();
  const Eigen::VectorXd x = solver_.solve(rhs);
  last_solve_seconds_ = seconds_since(start);
  if (solver_.info() != Eigen::Success) {
    throw std::runtime_error("ImexSystem: linear solve failed at step " +
                             std::to_string(state.step_index + 1) +
                             " (condition estimate " + std::to_string(condition_estimate()) + ")");
  }

  State next;
  next.u.resize(state.u.size());
  next.w.resize(state.w.size());
  scatter(x.head(n_active_), next.u);
  scatter(x.tail(n_active_), next.w);
  next.step_index = state.step_index + 1;
  next.time = state.time + cfg_.tau;
  return next;
}

Eigen::VectorXd ImexSystem::consistent_potential(const Eigen::VectorXd& u) const {
  const double eps2 = cfg_.eps * cfg_.eps;
  const Eigen::VectorXd rhs_full = eps2 * (ops_.stiffness * u) + ops_.dirichlet_u * u +
                                   assemble_nonlinear_load(*ctx_, u, cfg_.well, cfg_.eps) -
                                   ops_.load_q;
  Eigen::SimplicialLDLT<SparseMatrix> mass_solver(mass_active_);
  if (mass_solver.info() != Eigen::Success) {
    throw std::runtime_error("ImexSystem: mass factorization failed for initial potential");
  }
  const Eigen::VectorXd w_active = mass_solver.solve(gather(rhs_full));
  Eigen::VectorXd w(u.size());
  scatter(w_active, w);
  return w;
}

double ImexSystem::condition_estimate(int iterations) const {
  const int m = 2 * n_active_;
  const SparseMatrix transposed = SparseMatrix(system_.transpose());

  SplitMix64 rng(0x5EEDC0DE);
  Eigen::VectorXd x(m);
  for (int i = 0; i < m; ++i) x[i] = rng.next_double() - 0.5;
  x.normalize();

  // Largest singular value: power iteration on M^T M.
  double sigma_max = 0.0;
  for (int it = 0; it < iterations; ++it) {
    x = transposed * (system_ * x).eval();
    const double norm = x.norm();
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    sigma_max = std::sqrt(norm);
    x /= norm;
  }

  // Smallest singular value: inverse iteration using a factorization of M^T.
  Eigen::SparseLU<SparseMatrix> tr_solver;
  tr_solver.compute(transposed);
  if (tr_solver.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) y[i] = rng.next_double() - 0.5;
  y.normalize();
  double inv_sigma_min = 0.0;
  for (int it = 0; it < iterations; ++it) {
    y = solver_.solve(tr_solver.solve(y).eval());
    const double norm = y.norm();
    if (!std::isfinite(norm) || norm == 0.0) return std::numeric_limits<double>::infinity();
    inv_sigma_min = std::sqrt(norm);
    y /= norm;
  }
  return sigma_max * inv_sigma_min;
}

State imex_step(const State& state, const BackgroundMesh& mesh, const FomConfig& cfg) {
  const ImexSystem system(mesh, cfg, state.time + cfg.tau);
  return system.step(state);
}

FomRunResult run_fom(const BackgroundMesh& mesh, const FomConfig& cfg, const Eigen::VectorXd& u0,
                     const std::vector<int>& record_steps) {
  cfg.validate();
  const auto wall_start = Clock::now();
  const bool moving = cfg.geometry.kind == LevelSet::Kind::MovingCircle;
  const bool record_all = record_steps.empty();
  const auto should_record = [&](int step) {
    if (record_all) return true;
    return std::find(record_steps.begin(), record_steps.end(), step) != record_steps.end();
  };

  FomRunResult result;
  auto system = std::make_unique<ImexSystem>(mesh, cfg, 0.0);
  auto energy_ctx = std::make_unique<AssemblyContext>(mesh, system->classification(), 6, 3);

  State state;
  state.u = Eigen::VectorXd::Zero(mesh.n_vertices());
  for (int dof : system->classification().active_dofs) state.u[dof] = u0[dof];
  state.w = system->consistent_potential(state.u);
  state.step_index = 0;
  state.time = 0.0;

  const auto record_diagnostics = [&](const State& s, const ImexSystem& sys, double solve_s) {
    StepDiagnostics d;
    d.step = s.step_index;
    d.time = s.time;
    d.mass = compute_mass(s.u, sys.operators().mass);
    d.energy = compute_energy(*energy_ctx, s.u, cfg.well, cfg.eps);
    d.solve_seconds = solve_s;
    result.diagnostics.push_back(d);
  };

  record_diagnostics(state, *system, 0.0);
  if (should_record(0)) result.recorded.push_back(state);

  for (int step = 1; step <= cfg.n_steps; ++step) {
    const auto step_start = Clock::now();
    if (moving) {
      system = std::make_unique<ImexSystem>(mesh, cfg, step * cfg.tau);
      energy_ctx = std::make_unique<AssemblyContext>(mesh, system->classification(), 6, 3);
    }
    try {
      state = system->step(state);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(e.what()) + " [step " + std::to_string(step) + "]");
    }
    result.step_seconds += seconds_since(step_start);
    result.solve_seconds += system->last_solve_seconds();
    record_diagnostics(state, *system, system->last_solve_seconds());
    if (should_record(step)) result.recorded.push_back(state);
  }
  result.wall_seconds = seconds_since(wall_start);
  return result;
}

}  // namespace cutch
