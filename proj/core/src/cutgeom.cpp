// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cutch {

LevelSet LevelSet::fixed_circle(double diameter) {
  LevelSet ls;
  ls.kind = Kind::FixedCircle;
  ls.mu = diameter;
  return ls;
}

LevelSet LevelSet::moving_circle(const Eigen::Vector2d& center0, double x0, double mu_min,
                                 double mu_max, double diameter, double period) {
  LevelSet ls;
  ls.kind = Kind::MovingCircle;
  ls.center0 = center0;
  ls.x0 = x0;
  ls.mu_min = mu_min;
  ls.mu_max = mu_max;
  ls.delta = diameter;
  ls.period = period;
  return ls;
}

Eigen::Vector2d LevelSet::center(double t) const {
  if (kind == Kind::FixedCircle) return {0.0, 0.0};
  const double mu_t = (mu_max - mu_min) * t / period + mu_min;
  return center0 + Eigen::Vector2d(0.0, x0 * std::sin(140.0 * M_PI * mu_t));
}

double LevelSet::radius(double t) const {
  (void)t;
  return 0.5 * (kind == Kind::FixedCircle ? mu : delta);
}

double LevelSet::value(const Eigen::Vector2d& p, double t) const {
  const double r = radius(t);
  return r * r - (p - center(t)).squaredNorm();
}

CutClassification classify(const BackgroundMesh& mesh, const LevelSet& ls, double t) {
  CutClassification cls;
  cls.has_level_set = true;
  cls.level_set = ls;
  cls.time = t;
  cls.vertex_phi.resize(mesh.n_vertices());
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    double phi = ls.value(mesh.vertices[v], t);
    // Degenerate vertex values are snapped to the physical side.
    if (std::abs(phi) < kVertexSnapTolerance) phi = -kVertexSnapTolerance;
    cls.vertex_phi[v] = phi;
  }

  cls.element_tag.resize(mesh.n_triangles());
  cls.dof_active.assign(mesh.n_vertices(), 0);
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const auto& v = mesh.triangles[tri].v;
    int negative = 0;
    for (int k = 0; k < 3; ++k) {
      if (cls.vertex_phi[v[k]] < 0.0) ++negative;
    }
    ElementTag tag = ElementTag::Cut;
    if (negative == 3) tag = ElementTag::Physical;
    if (negative == 0) tag = ElementTag::External;
    cls.element_tag[tri] = tag;
    if (tag != ElementTag::External) {
      cls.active_elements.push_back(tri);
      for (int k = 0; k < 3; ++k) cls.dof_active[v[k]] = 1;
    }
    if (tag == ElementTag::Cut) cls.cut_elements.push_back(tri);
  }

  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (cls.dof_active[v]) cls.active_dofs.push_back(v);
  }

  // Interior faces of the active submesh touching a cut element; faces on the
  // boundary of the active region (active-external) are excluded.
  for (int f = 0; f < static_cast<int>(mesh.interior_faces.size()); ++f) {
    const auto& face = mesh.interior_faces[f];
    if (!cls.is_active(face.left) || !cls.is_active(face.right)) continue;
    if (cls.is_cut(face.left) || cls.is_cut(face.right)) cls.stab_faces.push_back(f);
  }
  return cls;
}

namespace {

using EdgeCrossing = std::function<Eigen::Vector2d(const Eigen::Vector2d&, double,
                                                   const Eigen::Vector2d&, double)>;

Eigen::Vector2d edge_zero(const Eigen::Vector2d& pi, double fi, const Eigen::Vector2d& pj,
                          double fj) {
  const double s = fi / (fi - fj);
  return pi + s * (pj - pi);
}

// Root of the circular level set along the edge; the interpolated root is
// the fallback when snapping has perturbed the bracketing.
Eigen::Vector2d edge_zero_exact(const CutClassification& cls, const Eigen::Vector2d& pi,
                                double fi, const Eigen::Vector2d& pj, double fj) {
  const Eigen::Vector2d c = cls.level_set.center(cls.time);
  const double r = cls.level_set.radius(cls.time);
  const Eigen::Vector2d d = pj - pi;
  const Eigen::Vector2d e = pi - c;
  const double a = d.squaredNorm();
  const double b = 2.0 * d.dot(e);
  const double k = e.squaredNorm() - r * r;
  const double disc = b * b - 4.0 * a * k;
  if (a > 0.0 && disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b == 0.0 ? 1.0 : b));
    for (double t : {q / a, q == 0.0 ? -1.0 : k / q}) {
      if (t >= -1e-9 && t <= 1.0 + 1e-9) return pi + std::clamp(t, 0.0, 1.0) * d;
    }
  }
  return edge_zero(pi, fi, pj, fj);
}

std::vector<Eigen::Vector2d> clip_negative(const std::array<Eigen::Vector2d, 3>& p,
                                           const std::array<double, 3>& f,
                                           const EdgeCrossing& crossing) {
  std::vector<Eigen::Vector2d> poly;
  poly.reserve(4);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (f[i] < 0.0) poly.push_back(p[i]);
    if ((f[i] < 0.0) != (f[j] < 0.0)) poly.push_back(crossing(p[i], f[i], p[j], f[j]));
  }
  return poly;
}

std::optional<std::pair<Eigen::Vector2d, Eigen::Vector2d>> zero_segment_impl(
    const std::array<Eigen::Vector2d, 3>& p, const std::array<double, 3>& f,
    const EdgeCrossing& crossing) {
  Eigen::Vector2d ends[2];
  int count = 0;
  for (int i = 0; i < 3 && count < 2; ++i) {
    const int j = (i + 1) % 3;
    if ((f[i] < 0.0) != (f[j] < 0.0)) ends[count++] = crossing(p[i], f[i], p[j], f[j]);
  }
  if (count < 2) return std::nullopt;
  if ((ends[1] - ends[0]).norm() < 1e-14) return std::nullopt;
  return std::make_pair(ends[0], ends[1]);
}

EdgeCrossing crossing_for(const CutClassification& cls) {
  if (!cls.has_level_set) return edge_zero;
  return [&cls](const Eigen::Vector2d& pi, double fi, const Eigen::Vector2d& pj, double fj) {
    return edge_zero_exact(cls, pi, fi, pj, fj);
  };
}

}  // namespace

std::vector<Eigen::Vector2d> clip_triangle_negative(const std::array<Eigen::Vector2d, 3>& p,
                                                    const std::array<double, 3>& f) {
  return clip_negative(p, f, edge_zero);
}

std::optional<std::pair<Eigen::Vector2d, Eigen::Vector2d>> zero_segment(
    const std::array<Eigen::Vector2d, 3>& p, const std::array<double, 3>& f) {
  return zero_segment_impl(p, f, edge_zero);
}

QuadratureRule cut_volume_quadrature(const BackgroundMesh& mesh, const CutClassification& cls,
                                     int tri, int order) {
  if (!cls.is_active(tri)) {
    throw std::invalid_argument("cut_volume_quadrature: element is not active");
  }
  const auto p = mesh.triangle_points(tri);
  if (!cls.is_cut(tri)) {
    return map_to_triangle(triangle_rule(order), p[0], p[1], p[2]);
  }
  const auto& v = mesh.triangles[tri].v;
  const std::array<double, 3> f = {cls.vertex_phi[v[0]], cls.vertex_phi[v[1]],
                                   cls.vertex_phi[v[2]]};
  const auto poly = clip_negative(p, f, crossing_for(cls));
  if (poly.size() < 3) return {};
  if (std::abs(polygon_area(poly)) < 1e-14 * mesh.triangle_area(tri)) return {};
  return polygon_quadrature(poly, order);
}

QuadratureRule interface_quadrature(const BackgroundMesh& mesh, const CutClassification& cls,
                                    int tri, int order) {
  if (!cls.is_cut(tri)) return {};
  const auto p = mesh.triangle_points(tri);
  const auto& v = mesh.triangles[tri].v;
  const std::array<double, 3> f = {cls.vertex_phi[v[0]], cls.vertex_phi[v[1]],
                                   cls.vertex_phi[v[2]]};
  const auto seg = zero_segment_impl(p, f, crossing_for(cls));
  if (!seg) return {};

  // Gradient of the linear interpolant is constant on the element and points
  // into the hole, i.e. out of the physical domain.
  const double two_area = 2.0 * mesh.triangle_area(tri);
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d e = p[(i + 2) % 3] - p[(i + 1) % 3];
    grad += f[i] * Eigen::Vector2d(-e.y(), e.x()) / two_area;
  }
  const double norm = grad.norm();
  if (norm < 1e-300) return {};
  const Eigen::Vector2d normal = grad / norm;

  QuadratureRule rule = segment_rule(seg->first, seg->second, order);
  rule.normals.assign(rule.size(), normal);
  return rule;
}

}  // namespace cutch
