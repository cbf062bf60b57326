// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/assembly.hpp"

#include <stdexcept>

namespace cutch {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<std::array<double, 3>> shape_values(const AffineBasis& basis,
                                                const QuadratureRule& rule) {
  std::vector<std::array<double, 3>> values(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    for (int i = 0; i < 3; ++i) values[q][i] = basis.eval(i, rule.points[q]);
  }
  return values;
}

SparseMatrix from_triplets(int n, const std::vector<Triplet>& triplets) {
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

AffineBasis affine_basis(const std::array<Eigen::Vector2d, 3>& p) {
  AffineBasis basis;
  const double two_area = (p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                          (p[2].x() - p[0].x()) * (p[1].y() - p[0].y());
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d e = p[(i + 2) % 3] - p[(i + 1) % 3];
    basis.grad[i] = Eigen::Vector2d(-e.y(), e.x()) / two_area;
    basis.offset[i] = (i == 0 ? 1.0 : 0.0) - basis.grad[i].dot(p[0]);
  }
  return basis;
}

AssemblyContext::AssemblyContext(const BackgroundMesh& mesh, const CutClassification& cls,
                                 int volume_order, int interface_order)
    : mesh_(&mesh), cls_(&cls) {
  element_index_.assign(mesh.n_triangles(), -1);
  elements_.reserve(cls.active_elements.size());
  for (int tri : cls.active_elements) {
    ElementData el;
    el.tri = tri;
    el.dofs = mesh.triangles[tri].v;
    const auto pts = mesh.triangle_points(tri);
    el.basis = affine_basis(pts);
    el.full_area = mesh.triangle_area(tri);
    el.volume = cut_volume_quadrature(mesh, cls, tri, volume_order);
    el.volume_shape = shape_values(el.basis, el.volume);
    if (cls.is_cut(tri)) {
      el.interface = interface_quadrature(mesh, cls, tri, interface_order);
      el.interface_shape = shape_values(el.basis, el.interface);
    }
    element_index_[tri] = static_cast<int>(elements_.size());
    elements_.push_back(std::move(el));
  }
}

const ElementData* AssemblyContext::element_for_triangle(int tri) const {
  const int idx = element_index_[tri];
  return idx < 0 ? nullptr : &elements_[idx];
}

SparseMatrix assemble_mass(const AssemblyContext& ctx) {
  std::vector<Triplet> triplets;
  triplets.reserve(ctx.elements().size() * 9);
  for (const auto& el : ctx.elements()) {
    double local[3][3] = {};
    for (std::size_t q = 0; q < el.volume.size(); ++q) {
      const double w = el.volume.weights[q];
      const auto& shp = el.volume_shape[q];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local[i][j] += w * shp[i] * shp[j];
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) triplets.emplace_back(el.dofs[i], el.dofs[j], local[i][j]);
    }
  }
  return from_triplets(ctx.n_dofs(), triplets);
}

SparseMatrix assemble_stiffness(const AssemblyContext& ctx) {
  std::vector<Triplet> triplets;
  triplets.reserve(ctx.elements().size() * 9);
  for (const auto& el : ctx.elements()) {
    const double area = el.volume.weight_sum();  // gradients are constant
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(el.dofs[i], el.dofs[j], area * el.basis.grad[i].dot(el.basis.grad[j]));
      }
    }
  }
  return from_triplets(ctx.n_dofs(), triplets);
}

NitscheNeumannOperators assemble_nitsche_neumann(
    const AssemblyContext& ctx, double alpha_n,
    const std::function<double(const Eigen::Vector2d&)>& g_n) {
  NitscheNeumannOperators ops;
  ops.load_v = Eigen::VectorXd::Zero(ctx.n_dofs());
  ops.load_q = Eigen::VectorXd::Zero(ctx.n_dofs());
  const double h = ctx.h();
  std::vector<Triplet> triplets;
  for (const auto& el : ctx.elements()) {
    if (el.interface.empty()) continue;
    for (std::size_t q = 0; q < el.interface.size(); ++q) {
      const double w = el.interface.weights[q];
      const auto& n = el.interface.normals[q];
      double dn[3];
      for (int i = 0; i < 3; ++i) dn[i] = n.dot(el.basis.grad[i]);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          triplets.emplace_back(el.dofs[i], el.dofs[j], alpha_n * h * w * dn[j] * dn[i]);
        }
      }
      if (g_n) {
        const double g = g_n(el.interface.points[q]);
        const auto& shp = el.interface_shape[q];
        for (int i = 0; i < 3; ++i) {
          ops.load_v[el.dofs[i]] += w * g * (shp[i] + alpha_n * h * dn[i]);
          ops.load_q[el.dofs[i]] += w * g * shp[i];
        }
      }
    }
  }
  ops.flux_penalty = from_triplets(ctx.n_dofs(), triplets);
  return ops;
}

SparseMatrix assemble_ghost_penalty(const AssemblyContext& ctx, GhostVariant variant,
                                    double alpha1) {
  const auto& mesh = ctx.mesh();
  const auto& cls = ctx.classification();
  const double h = ctx.h();
  std::vector<Triplet> triplets;
  triplets.reserve(cls.stab_faces.size() * 16);

  for (int f : cls.stab_faces) {
    const auto& face = mesh.interior_faces[f];
    const ElementData* left = ctx.element_for_triangle(face.left);
    const ElementData* right = ctx.element_for_triangle(face.right);

    // Patch dofs: the shared pair first, then the vertex opposite the face
    // in each element. left_local/right_local map patch index -> local index.
    std::array<int, 4> dofs = {face.v[0], face.v[1], -1, -1};
    int left_local[4] = {-1, -1, -1, -1};
    int right_local[4] = {-1, -1, -1, -1};
    for (int k = 0; k < 3; ++k) {
      if (left->dofs[k] == dofs[0]) left_local[0] = k;
      else if (left->dofs[k] == dofs[1]) left_local[1] = k;
      else { dofs[2] = left->dofs[k]; left_local[2] = k; }
    }
    for (int k = 0; k < 3; ++k) {
      if (right->dofs[k] == dofs[0]) right_local[0] = k;
      else if (right->dofs[k] == dofs[1]) right_local[1] = k;
      else { dofs[3] = right->dofs[k]; right_local[3] = k; }
    }

    double local[4][4] = {};
    if (variant == GhostVariant::ValueJump) {
      // Difference of the side extensions, integrated over both elements of
      // the patch; exact with a degree-2 rule.
      const auto eval_diff = [&](int patch, const Eigen::Vector2d& x) {
        double value = 0.0;
        if (left_local[patch] >= 0) value += left->basis.eval(left_local[patch], x);
        if (right_local[patch] >= 0) value -= right->basis.eval(right_local[patch], x);
        return value;
      };
      const double scale = alpha1 / (h * h);
      for (const ElementData* side : {left, right}) {
        const auto pts = mesh.triangle_points(side->tri);
        const QuadratureRule rule = map_to_triangle(triangle_rule(2), pts[0], pts[1], pts[2]);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          double d[4];
          for (int patch = 0; patch < 4; ++patch) d[patch] = eval_diff(patch, rule.points[q]);
          const double w = scale * rule.weights[q];
          for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) local[i][j] += w * d[i] * d[j];
          }
        }
      }
    } else {
      const Eigen::Vector2d a = mesh.vertices[face.v[0]];
      const Eigen::Vector2d b = mesh.vertices[face.v[1]];
      const Eigen::Vector2d tangent = b - a;
      const double len = tangent.norm();
      const Eigen::Vector2d n_f(-tangent.y() / len, tangent.x() / len);
      double jump[4] = {};
      for (int patch = 0; patch < 4; ++patch) {
        if (left_local[patch] >= 0) jump[patch] += n_f.dot(left->basis.grad[left_local[patch]]);
        if (right_local[patch] >= 0) jump[patch] -= n_f.dot(right->basis.grad[right_local[patch]]);
      }
      const double w = alpha1 * h * len;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) local[i][j] = w * jump[i] * jump[j];
      }
    }

    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) triplets.emplace_back(dofs[i], dofs[j], local[i][j]);
    }
  }
  return from_triplets(ctx.n_dofs(), triplets);
}

DirichletNitscheOperators assemble_dirichlet_nitsche(const AssemblyContext& ctx, double alpha_d,
                                                     double eps) {
  DirichletNitscheOperators ops;
  ops.load_v = Eigen::VectorXd::Zero(ctx.n_dofs());
  ops.load_q = Eigen::VectorXd::Zero(ctx.n_dofs());
  const double h = ctx.h();
  std::vector<Triplet> trip_u, trip_w;
  for (const auto& el : ctx.elements()) {
    if (el.interface.empty()) continue;
    double local[3][3] = {};
    for (std::size_t q = 0; q < el.interface.size(); ++q) {
      const double w = el.interface.weights[q];
      const auto& n = el.interface.normals[q];
      const auto& shp = el.interface_shape[q];
      double dn[3];
      for (int i = 0; i < 3; ++i) dn[i] = n.dot(el.basis.grad[i]);
      // consistency + symmetry + penalty, rows test / columns trial
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          local[i][j] += w * (-dn[j] * shp[i] - shp[j] * dn[i] + (alpha_d / h) * shp[j] * shp[i]);
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        trip_u.emplace_back(el.dofs[i], el.dofs[j], eps * eps * local[i][j]);
        trip_w.emplace_back(el.dofs[i], el.dofs[j], local[i][j]);
      }
    }
  }
  ops.on_u = from_triplets(ctx.n_dofs(), trip_u);
  ops.on_w = from_triplets(ctx.n_dofs(), trip_w);
  return ops;
}

Eigen::VectorXd assemble_nonlinear_load(const AssemblyContext& ctx, const Eigen::VectorXd& u,
                                        const DoubleWell& well, double eps) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(ctx.n_dofs());
  const double inv_eps2 = 1.0 / (eps * eps);
  for (const auto& el : ctx.elements()) {
    const double u0 = u[el.dofs[0]], u1 = u[el.dofs[1]], u2 = u[el.dofs[2]];
    for (std::size_t q = 0; q < el.volume.size(); ++q) {
      const auto& shp = el.volume_shape[q];
      const double uq = u0 * shp[0] + u1 * shp[1] + u2 * shp[2];
      const double fw = inv_eps2 * el.volume.weights[q] * well.fprime(uq);
      load[el.dofs[0]] += fw * shp[0];
      load[el.dofs[1]] += fw * shp[1];
      load[el.dofs[2]] += fw * shp[2];
    }
  }
  return load;
}

OperatorSet assemble_operators(const AssemblyContext& ctx, const AssemblyParameters& params) {
  OperatorSet ops;
  ops.bc = params.bc;
  ops.gp_variant = params.gp_variant;
  ops.mass = assemble_mass(ctx);
  ops.stiffness = assemble_stiffness(ctx);
  auto nitsche = assemble_nitsche_neumann(ctx, params.alpha_n, params.g_n);
  ops.nitsche_flux = std::move(nitsche.flux_penalty);
  ops.load_v = std::move(nitsche.load_v);
  ops.load_q = std::move(nitsche.load_q);
  ops.ghost = assemble_ghost_penalty(ctx, params.gp_variant, params.alpha1);
  if (params.bc == BcMode::DirichletEmbedded) {
    auto dirichlet = assemble_dirichlet_nitsche(ctx, params.alpha_d, params.eps);
    ops.dirichlet_u = std::move(dirichlet.on_u);
    ops.dirichlet_w = std::move(dirichlet.on_w);
  } else {
    ops.dirichlet_u = SparseMatrix(ctx.n_dofs(), ctx.n_dofs());
    ops.dirichlet_w = SparseMatrix(ctx.n_dofs(), ctx.n_dofs());
  }
  return ops;
}

}  // namespace cutch
