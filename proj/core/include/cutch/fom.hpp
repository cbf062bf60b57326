// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "cutch/assembly.hpp"

namespace cutch {

struct FomConfig {
  double eps = 1e-2;
  DoubleWell well{};
  double alpha_n = 10.0;
  double alpha1 = 1e-3;
  double alpha_d = 10.0;
  double tau = 1.5625e-6;
  int n_steps = 100;
  BcMode bc = BcMode::Neumann;
  LevelSet geometry = LevelSet::fixed_circle(0.0);
  int n = 48;
  GhostVariant gp_variant = GhostVariant::ValueJump;
  bool gp_on_w = false;
  double solver_tol = 1e-12;

  AssemblyParameters assembly_parameters() const {
    AssemblyParameters p;
    p.alpha_n = alpha_n;
    p.alpha1 = alpha1;
    p.alpha_d = alpha_d;
    p.eps = eps;
    p.bc = bc;
    p.gp_variant = gp_variant;
    return p;
  }
  void validate() const;
};

// Coefficient vectors over all background dofs; entries outside the active
// set are exactly zero.
struct State {
  Eigen::VectorXd u;
  Eigen::VectorXd w;
  int step_index = 0;
  double time = 0.0;
};

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double solve_seconds = 0.0;
};

// m(u) = 1^T A u, the integral of u_h over the physical domain.
double compute_mass(const Eigen::VectorXd& u, const SparseMatrix& mass);

// Ginzburg-Landau energy with order-6 volume rules.
double compute_energy(const BackgroundMesh& mesh, const CutClassification& cls,
                      const Eigen::VectorXd& u, const DoubleWell& well, double eps);
double compute_energy(const AssemblyContext& energy_ctx, const Eigen::VectorXd& u,
                      const DoubleWell& well, double eps);

enum class CrossSetting { I, II };

// Cross-shaped two-phase initial data, evaluated vertex-wise.
Eigen::VectorXd initial_cross(CrossSetting setting, const BackgroundMesh& mesh);

// Vertex-wise uniform values in [low, high] from a SplitMix64 stream keyed by
// the vertex index; identical for every geometry parameter.
Eigen::VectorXd initial_pseudorandom(std::uint64_t seed, const BackgroundMesh& mesh, double low,
                                     double high);

// One assembled and factorized backward-Euler IMEX system: for fixed
// geometry the factorization is reused across all steps.
class ImexSystem {
 public:
  ImexSystem(const BackgroundMesh& mesh, const FomConfig& cfg, double time);

  const AssemblyContext& context() const { return *ctx_; }
  const CutClassification& classification() const { return cls_; }
  const OperatorSet& operators() const { return ops_; }

  // Advances (u^n, w^n) -> (u^{n+1}, w^{n+1}); inactive entries stay zero.
  State step(const State& state) const;

  // Potential consistent with the q-row equation at the given concentration;
  // used for the initial state only.
  Eigen::VectorXd consistent_potential(const Eigen::VectorXd& u) const;

  // 2-norm condition estimate of the system matrix by power iteration.
  double condition_estimate(int iterations = 40) const;

  double last_solve_seconds() const { return last_solve_seconds_; }

 private:
  Eigen::VectorXd gather(const Eigen::VectorXd& full) const;
  void scatter(const Eigen::VectorXd& compact, Eigen::VectorXd& full) const;

  const BackgroundMesh* mesh_;
  FomConfig cfg_;
  CutClassification cls_;
  std::unique_ptr<AssemblyContext> ctx_;
  OperatorSet ops_;
  SparseMatrix system_;           // restricted to active dofs
  SparseMatrix mass_active_;
  Eigen::SparseLU<SparseMatrix> solver_;
  Eigen::VectorXd load_v_active_, load_q_active_;
  int n_active_ = 0;
  mutable double last_solve_seconds_ = 0.0;
};

State imex_step(const State& state, const BackgroundMesh& mesh, const FomConfig& cfg);

struct FomRunResult {
  std::vector<State> recorded;          // states at the requested step indices
  std::vector<StepDiagnostics> diagnostics;
  double wall_seconds = 0.0;
  double solve_seconds = 0.0;           // accumulated linear-solve time
  double step_seconds = 0.0;            // accumulated full step time
};

// Runs n_steps of the IMEX scheme from u0 (restricted to the active set).
// record_steps lists step indices to keep, 0 meaning the initial state; an
// empty list records every step including the initial state.
FomRunResult run_fom(const BackgroundMesh& mesh, const FomConfig& cfg, const Eigen::VectorXd& u0,
                     const std::vector<int>& record_steps = {});

}  // namespace cutch
