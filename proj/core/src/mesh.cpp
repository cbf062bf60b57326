// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace cutch {

double BackgroundMesh::triangle_area(int t) const {
  const auto p = triangle_points(t);
  return 0.5 * ((p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                (p[2].x() - p[0].x()) * (p[1].y() - p[0].y()));
}

BackgroundMesh build_background_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_background_mesh: n must be >= 1");

  BackgroundMesh mesh;
  mesh.subdivisions = n;
  mesh.h = std::sqrt(2.0) / n;

  mesh.vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      mesh.vertices.emplace_back(-0.5 + static_cast<double>(j) / n,
                                 -0.5 + static_cast<double>(i) / n);
    }
  }

  const auto vid = [n](int i, int j) { return i * (n + 1) + j; };
  mesh.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = vid(i, j), b = vid(i, j + 1);
      const int c = vid(i + 1, j + 1), d = vid(i + 1, j);
      mesh.triangles.push_back({{a, b, c}});
      mesh.triangles.push_back({{a, c, d}});
    }
  }

  // First triangle touching an edge becomes `left`; ordered map keeps the
  // face numbering independent of everything but the mesh itself.
  std::map<std::array<int, 2>, std::pair<int, int>> edges;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      int u = tri.v[e], w = tri.v[(e + 1) % 3];
      if (u > w) std::swap(u, w);
      auto [it, inserted] = edges.try_emplace({u, w}, t, -1);
      if (!inserted) it->second.second = t;
    }
  }
  for (const auto& [key, owners] : edges) {
    if (owners.second >= 0) {
      mesh.interior_faces.push_back({key, owners.first, owners.second});
    } else {
      mesh.boundary_faces.push_back({key, owners.first});
    }
  }
  return mesh;
}

void BackgroundMesh::write_csv(std::ostream& os) const {
  os << "vertices\n";
  char buf[80];
  for (int i = 0; i < n_vertices(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i, vertices[i].x(), vertices[i].y());
    os << buf;
  }
  os << "triangles\n";
  for (int t = 0; t < n_triangles(); ++t) {
    const auto& tri = triangles[t];
    os << t << ',' << tri.v[0] << ',' << tri.v[1] << ',' << tri.v[2] << '\n';
  }
}

}  // namespace cutch
