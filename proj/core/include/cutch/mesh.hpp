// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <vector>

namespace cutch {

struct Triangle {
  std::array<int, 3> v;  // counterclockwise vertex indices
};

struct InteriorFace {
  std::array<int, 2> v;  // endpoint vertex indices, v[0] < v[1]
  int left;              // first triangle encountered in element order
  int right;
};

struct BoundaryFace {
  std::array<int, 2> v;
  int owner;
};

// Fixed conforming triangulation of the background square [-0.5, 0.5]^2.
// Immutable after construction; independent of the geometric parameter.
struct BackgroundMesh {
  int subdivisions = 0;  // n squares per side
  double h = 0.0;        // max element diameter (= cell diagonal)
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Triangle> triangles;
  std::vector<InteriorFace> interior_faces;
  std::vector<BoundaryFace> boundary_faces;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }

  std::array<Eigen::Vector2d, 3> triangle_points(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri.v[0]], vertices[tri.v[1]], vertices[tri.v[2]]};
  }
  double triangle_area(int t) const;

  // CSV dump with `vertices` (id,x,y) and `triangles` (id,v0,v1,v2) sections.
  void write_csv(std::ostream& os) const;
};

// Structured n-by-n grid of squares, each split along the lower-left to
// upper-right diagonal. Vertex numbering is row-major; throws on n < 1.
BackgroundMesh build_background_mesh(int n);

}  // namespace cutch
