// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cutch {

// Quadrature points in physical coordinates. Interface rules additionally
// carry one unit normal per point, oriented out of the physical domain.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  std::vector<Eigen::Vector2d> normals;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  double weight_sum() const;
};

// Gauss-Legendre nodes/weights on [-1, 1]; weights sum to 2.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n_points);

// Symmetric rule on the reference triangle in barycentric coordinates,
// exact for polynomials up to `degree` (supported: 1..6). Weights sum to 1.
struct TriangleRule {
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
};
const TriangleRule& triangle_rule(int degree);

// Maps a reference triangle rule onto the physical triangle (a, b, c);
// weights are scaled by the triangle area.
QuadratureRule map_to_triangle(const TriangleRule& ref, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, const Eigen::Vector2d& c);

// Gauss rule on the straight segment [a, b], exact for 1D polynomials up to
// `degree` along the segment; weights sum to the segment length.
QuadratureRule segment_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree);

// Shoelace area of a simple polygon (positive for counterclockwise order).
double polygon_area(const std::vector<Eigen::Vector2d>& poly);

// Fan-triangulates a convex polygon from its first vertex and places a
// mapped triangle rule of the requested degree on every fan triangle.
QuadratureRule polygon_quadrature(const std::vector<Eigen::Vector2d>& poly, int degree);

}  // namespace cutch
