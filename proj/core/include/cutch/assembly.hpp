// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "cutch/cutgeom.hpp"

namespace cutch {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class BcMode { Neumann, DirichletEmbedded };
enum class GhostVariant { ValueJump, DerivativeJump };

// Double-well free energy density F(u) = g2 u^4/4 + g1 u^3/3 + g0 u^2/2.
struct DoubleWell {
  double g0 = 2.0;
  double g1 = 9.0;
  double g2 = 4.0;

  double f(double u) const { return g2 * u * u * u * u / 4 + g1 * u * u * u / 3 + g0 * u * u / 2; }
  double fprime(double u) const { return ((g2 * u + g1) * u + g0) * u; }
};

// Affine P1 basis of one triangle, valid on the whole plane (used for the
// polynomial extensions in the ghost penalty).
struct AffineBasis {
  std::array<Eigen::Vector2d, 3> grad;
  std::array<double, 3> offset;

  double eval(int i, const Eigen::Vector2d& p) const { return offset[i] + grad[i].dot(p); }
};
AffineBasis affine_basis(const std::array<Eigen::Vector2d, 3>& p);

// Cached per-element data for one classification: volume and interface rules
// with pre-evaluated shape values.
struct ElementData {
  int tri = -1;
  std::array<int, 3> dofs{};
  AffineBasis basis;
  double full_area = 0.0;
  QuadratureRule volume;
  std::vector<std::array<double, 3>> volume_shape;
  QuadratureRule interface;
  std::vector<std::array<double, 3>> interface_shape;
};

class AssemblyContext {
 public:
  AssemblyContext(const BackgroundMesh& mesh, const CutClassification& cls, int volume_order = 4,
                  int interface_order = 3);

  const BackgroundMesh& mesh() const { return *mesh_; }
  const CutClassification& classification() const { return *cls_; }
  const std::vector<ElementData>& elements() const { return elements_; }
  const ElementData* element_for_triangle(int tri) const;
  int n_dofs() const { return mesh_->n_vertices(); }
  double h() const { return mesh_->h; }

 private:
  const BackgroundMesh* mesh_;
  const CutClassification* cls_;
  std::vector<ElementData> elements_;
  std::vector<int> element_index_;
};

// A_ij = (psi_j, psi_i) over the physical part of the active elements.
SparseMatrix assemble_mass(const AssemblyContext& ctx);

// S_ij = (grad psi_j, grad psi_i); scalar factors are applied at system build.
SparseMatrix assemble_stiffness(const AssemblyContext& ctx);

struct NitscheNeumannOperators {
  SparseMatrix flux_penalty;  // alpha_N h <n.grad psi_j, n.grad psi_i> on the interface
  Eigen::VectorXd load_v;     // <g_N, psi_i + alpha_N h n.grad psi_i>
  Eigen::VectorXd load_q;     // <g_N, psi_i>
};
NitscheNeumannOperators assemble_nitsche_neumann(
    const AssemblyContext& ctx, double alpha_n,
    const std::function<double(const Eigen::Vector2d&)>& g_n = {});

// Ghost penalty over the stabilization faces. ValueJump integrates the
// difference of the two side extensions over the element pair, DerivativeJump
// the normal-gradient jump over the face itself.
SparseMatrix assemble_ghost_penalty(const AssemblyContext& ctx, GhostVariant variant,
                                    double alpha1);

struct DirichletNitscheOperators {
  SparseMatrix on_u;       // q-row block, carries the eps^2 factor
  SparseMatrix on_w;       // v-row block, unscaled (tau applied at system build)
  Eigen::VectorXd load_v;  // zero: only homogeneous data is supported
  Eigen::VectorXd load_q;
};
DirichletNitscheOperators assemble_dirichlet_nitsche(const AssemblyContext& ctx, double alpha_d,
                                                     double eps);

// N_i = eps^-2 (F'(u_n), psi_i) with order-4 volume rules.
Eigen::VectorXd assemble_nonlinear_load(const AssemblyContext& ctx, const Eigen::VectorXd& u,
                                        const DoubleWell& well, double eps);

// All sparse blocks and loads of the semidiscrete form for one parameter
// value, one time, and one boundary-condition mode.
struct OperatorSet {
  SparseMatrix mass;          // A
  SparseMatrix stiffness;     // S
  SparseMatrix nitsche_flux;  // J_N
  SparseMatrix ghost;         // K_g
  SparseMatrix dirichlet_u;   // D_u (Dirichlet mode only, empty otherwise)
  SparseMatrix dirichlet_w;   // D_w
  Eigen::VectorXd load_v;
  Eigen::VectorXd load_q;

  double mu = 0.0;
  double time = 0.0;
  BcMode bc = BcMode::Neumann;
  GhostVariant gp_variant = GhostVariant::ValueJump;
};

struct AssemblyParameters {
  double alpha_n = 10.0;
  double alpha1 = 1e-3;
  double alpha_d = 10.0;
  double eps = 1e-2;
  BcMode bc = BcMode::Neumann;
  GhostVariant gp_variant = GhostVariant::ValueJump;
  std::function<double(const Eigen::Vector2d&)> g_n;  // empty means zero
};
OperatorSet assemble_operators(const AssemblyContext& ctx, const AssemblyParameters& params);

}  // namespace cutch
