// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include "cutch/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cutch {

double QuadratureRule::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

GaussLegendre gauss_legendre(int n_points) {
  if (n_points < 1) throw std::invalid_argument("gauss_legendre: n_points must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);
  const int n = n_points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

TriangleRule make_centroid_rule() {
  TriangleRule r;
  r.bary = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  r.weights = {1.0};
  return r;
}

TriangleRule make_degree2_rule() {
  TriangleRule r;
  const double a = 2.0 / 3.0, b = 1.0 / 6.0;
  r.bary = {{a, b, b}, {b, a, b}, {b, b, a}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

void push_s3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.bary.push_back({b, a, a});
  r.bary.push_back({a, b, a});
  r.bary.push_back({a, a, b});
  r.weights.insert(r.weights.end(), 3, w);
}

void push_s6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  r.bary.push_back({a, b, c});
  r.bary.push_back({a, c, b});
  r.bary.push_back({b, a, c});
  r.bary.push_back({b, c, a});
  r.bary.push_back({c, a, b});
  r.bary.push_back({c, b, a});
  r.weights.insert(r.weights.end(), 6, w);
}

// Dunavant rules; all-positive-weight variants only.
TriangleRule make_degree4_rule() {
  TriangleRule r;
  push_s3(r, 0.445948490915965, 0.223381589678011);
  push_s3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

TriangleRule make_degree5_rule() {
  TriangleRule r;
  r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.225);
  push_s3(r, 0.470142064105115, 0.132394152788506);
  push_s3(r, 0.101286507323456, 0.125939180544827);
  return r;
}

TriangleRule make_degree6_rule() {
  TriangleRule r;
  push_s3(r, 0.249286745170910, 0.116786275726379);
  push_s3(r, 0.063089014491502, 0.050844906370207);
  push_s6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374);
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule deg1 = make_centroid_rule();
  static const TriangleRule deg2 = make_degree2_rule();
  static const TriangleRule deg4 = make_degree4_rule();
  static const TriangleRule deg5 = make_degree5_rule();
  static const TriangleRule deg6 = make_degree6_rule();
  if (degree <= 1) return deg1;
  if (degree == 2) return deg2;
  if (degree <= 4) return deg4;  // degree-3 Dunavant has a negative weight
  if (degree == 5) return deg5;
  if (degree == 6) return deg6;
  throw std::invalid_argument("triangle_rule: degree > 6 not available");
}

QuadratureRule map_to_triangle(const TriangleRule& ref, const Eigen::Vector2d& a,
                               const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  QuadratureRule rule;
  const double area =
      0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  rule.points.reserve(ref.bary.size());
  rule.weights.reserve(ref.bary.size());
  for (std::size_t q = 0; q < ref.bary.size(); ++q) {
    const auto& l = ref.bary[q];
    rule.points.push_back(l[0] * a + l[1] * b + l[2] * c);
    rule.weights.push_back(ref.weights[q] * area);
  }
  return rule;
}

QuadratureRule segment_rule(const Eigen::Vector2d& a, const Eigen::Vector2d& b, int degree) {
  const int n = std::max(1, (degree + 2) / 2);
  const GaussLegendre gl = gauss_legendre(n);
  QuadratureRule rule;
  const double len = (b - a).norm();
  rule.points.reserve(n);
  rule.weights.reserve(n);
  for (int q = 0; q < n; ++q) {
    const double t = 0.5 * (gl.nodes[q] + 1.0);
    rule.points.push_back(a + t * (b - a));
    rule.weights.push_back(0.5 * len * gl.weights[q]);
  }
  return rule;
}

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

QuadratureRule polygon_quadrature(const std::vector<Eigen::Vector2d>& poly, int degree) {
  QuadratureRule rule;
  if (poly.size() < 3) return rule;
  const TriangleRule& ref = triangle_rule(degree);
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const QuadratureRule sub = map_to_triangle(ref, poly[0], poly[k], poly[k + 1]);
    rule.points.insert(rule.points.end(), sub.points.begin(), sub.points.end());
    rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return rule;
}

}  // namespace cutch
