// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>

#include "cutch/fom.hpp"

namespace cutch {

struct SnapshotMeta {
  double mu = 0.0;
  int time_index = 0;
};

// Zero-extended full-order states, one column per (parameter, time) pair.
struct SnapshotMatrix {
  Eigen::MatrixXd data;
  std::vector<SnapshotMeta> meta;
  char field = 'u';

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
};

enum class InnerProduct { MassWeighted, Euclidean };

// Truncated orthonormal modes with the eigenvalue spectrum of the snapshot
// correlation matrix (scaled by 1/N_s, sorted descending).
struct PodBasis {
  Eigen::MatrixXd modes;
  Eigen::VectorXd eigenvalues;
  InnerProduct inner_product = InnerProduct::MassWeighted;

  int n_modes() const { return static_cast<int>(modes.cols()); }
  Eigen::MatrixXd leading(int r) const { return modes.leftCols(std::min(r, n_modes())); }
};

// Correlation-matrix POD: builds C, solves the symmetric eigenproblem, forms
// the modes from the eigenvectors and re-orthonormalizes them in the declared
// inner product. Modes with eigenvalues below 1e-14 of the leading one are
// discarded; n_r beyond the numerical rank is clamped (with a warning on
// stderr).
PodBasis pod(const SnapshotMatrix& snapshots, const SparseMatrix& mass, int n_r,
             InnerProduct inner_product = InnerProduct::MassWeighted);

// One FOM run per training parameter; recorded states are stored exactly as
// solved (zero outside the active set). Throws with the offending parameter
// attached on failure.
std::pair<SnapshotMatrix, SnapshotMatrix> collect_snapshots(const BackgroundMesh& mesh,
                                                            const FomConfig& base_cfg,
                                                            const std::vector<double>& train_mus,
                                                            const std::vector<int>& record_steps,
                                                            const Eigen::VectorXd& u0);

// Galerkin projection of one parameter's operator set onto the bases.
struct ReducedOperators {
  Eigen::MatrixXd system;    // 2r x 2r block system, same row structure as ImexSystem
  Eigen::MatrixXd mass_uu;   // B_u^T A B_u, drives the time-stepping RHS
  Eigen::VectorXd load_u;    // B_u^T b_v
  Eigen::VectorXd load_q;    // B_w^T b_q
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  int r_u = 0;
  int r_w = 0;
};
ReducedOperators project_operators(const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                                   const OperatorSet& ops, const FomConfig& cfg);

struct RomState {
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  int step_index = 0;
  double time = 0.0;
};

// Reduced IMEX step: lifts u^n, assembles the full nonlinear load (no
// hyper-reduction), projects it, and solves the dense 2r system.
RomState rom_step(const RomState& state, const ReducedOperators& red,
                  const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                  const AssemblyContext& ctx, const FomConfig& cfg);

// Galerkin projection of the initial condition: (B^T M B) a0 = B^T M u0.
Eigen::VectorXd project_initial(const Eigen::VectorXd& u0, const Eigen::MatrixXd& basis_u,
                                const SparseMatrix& ip_matrix);

struct ErrorSeries {
  std::vector<double> per_step;  // relative L2 error at steps 1..n
  double mean = 0.0;
};

// e^n = ||u^n - u_r^n|| / ||u^n|| in the norm induced by `mass` (assembled
// over the active domain). Near-zero reference norms fall back to the
// absolute error.
ErrorSeries relative_error(const std::vector<Eigen::VectorXd>& reference,
                           const std::vector<Eigen::VectorXd>& reduced, const SparseMatrix& mass);

// Complete online solve for one parameter against a prepared basis pair.
struct RomRunResult {
  std::vector<Eigen::VectorXd> lifted_u;  // per step 1..n_steps
  std::vector<Eigen::VectorXd> lifted_w;
  double projection_seconds = 0.0;  // operator projection
  double reduced_seconds = 0.0;     // projection of loads + dense solves + updates
  double assembly_seconds = 0.0;    // full-order operator + nonlinear assembly
  double dense_solve_seconds = 0.0; // dense back-substitutions only
};
RomRunResult run_rom(const BackgroundMesh& mesh, const FomConfig& cfg,
                     const Eigen::MatrixXd& basis_u, const Eigen::MatrixXd& basis_w,
                     const Eigen::VectorXd& u0, const SparseMatrix& ip_matrix);

}  // namespace cutch
