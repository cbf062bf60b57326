// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cutch/mesh.hpp"
#include "cutch/quadrature.hpp"

namespace cutch {

// Implicit description of the embedded circular hole. The level set is
// positive inside the hole and negative in the physical domain, so the
// outward normal of the physical domain points along the gradient.
struct LevelSet {
  enum class Kind { FixedCircle, MovingCircle };

  Kind kind = Kind::FixedCircle;
  double mu = 0.0;  // hole diameter (FixedCircle)

  // MovingCircle schedule: center(t) = center0 + x0 * sin(140*pi*mu(t)) * e_y
  // with mu(t) = (mu_max - mu_min) * t / period + mu_min and fixed diameter.
  Eigen::Vector2d center0{0.0, 0.0};
  double x0 = 0.0;
  double mu_min = 0.0;
  double mu_max = 0.0;
  double delta = 0.0;  // hole diameter (MovingCircle)
  double period = 1.0;

  static LevelSet fixed_circle(double diameter);
  static LevelSet moving_circle(const Eigen::Vector2d& center0, double x0, double mu_min,
                                double mu_max, double diameter, double period);

  Eigen::Vector2d center(double t) const;
  double radius(double t) const;
  double value(const Eigen::Vector2d& p, double t) const;
};

enum class ElementTag : unsigned char { Physical, Cut, External };

constexpr double kVertexSnapTolerance = 1e-12;

// Per-parameter partition of the background mesh against one level set,
// with the face set used by the ghost-penalty stabilization.
struct CutClassification {
  std::vector<ElementTag> element_tag;   // per triangle
  std::vector<double> vertex_phi;        // snapped vertex level-set values
  std::vector<int> active_elements;      // Physical or Cut, ascending
  std::vector<int> cut_elements;         // ascending
  std::vector<int> stab_faces;           // indices into mesh.interior_faces
  std::vector<int> active_dofs;          // ascending vertex indices
  std::vector<unsigned char> dof_active; // per-vertex mask

  // When built by classify(), edge crossings of the cut quadrature are placed
  // at the exact level-set root along the edge instead of the interpolated
  // one; the interpolated root is the fallback for hand-built partitions.
  bool has_level_set = false;
  LevelSet level_set;
  double time = 0.0;

  bool is_active(int tri) const { return element_tag[tri] != ElementTag::External; }
  bool is_cut(int tri) const { return element_tag[tri] == ElementTag::Cut; }
};

CutClassification classify(const BackgroundMesh& mesh, const LevelSet& ls, double t = 0.0);

// --- Marching-triangle primitives on per-vertex values ---------------------
// These operate on the linear interpolant f_h of three vertex values and are
// shared between the geometric level set and field-contour extraction.

// Sub-polygon of the triangle where f_h < 0, in counterclockwise order.
std::vector<Eigen::Vector2d> clip_triangle_negative(const std::array<Eigen::Vector2d, 3>& p,
                                                    const std::array<double, 3>& f);

// Endpoints of the straight segment {f_h = 0} inside the triangle, or
// nothing when the zero set misses the triangle or degenerates to a point.
std::optional<std::pair<Eigen::Vector2d, Eigen::Vector2d>> zero_segment(
    const std::array<Eigen::Vector2d, 3>& p, const std::array<double, 3>& f);

// --- Cut quadrature ---------------------------------------------------------

// Volume rule over the physical part of an active element: a mapped reference
// rule on Physical elements, a fan-triangulated sub-polygon rule on Cut ones.
// A sub-polygon below 1e-14 of the element area yields an empty rule.
QuadratureRule cut_volume_quadrature(const BackgroundMesh& mesh, const CutClassification& cls,
                                     int tri, int order = 4);

// Segment rule on {phi_h = 0} inside a cut element with per-point unit
// normals pointing out of the physical domain. Empty on Physical elements.
QuadratureRule interface_quadrature(const BackgroundMesh& mesh, const CutClassification& cls,
                                    int tri, int order = 3);

}  // namespace cutch
