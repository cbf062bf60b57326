// SPDX-FileCopyrightText: Copyright (c) 2026 The cutch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "cutch/quadrature.hpp"
#include "test_oracles.hpp"

using namespace cutch;

TEST_CASE("gauss-legendre nodes match published values") {
  const auto rule = gauss_legendre(5);
  for (int i = 0; i < 5; ++i) {
    CHECK(rule.nodes[i] == doctest::Approx(oracle::gauss5_nodes()[i]).epsilon(1e-14));
    CHECK(rule.weights[i] == doctest::Approx(oracle::gauss5_weights()[i]).epsilon(1e-14));
  }
  for (int n = 1; n <= 12; ++n) {
    const auto r = gauss_legendre(n);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("triangle rules integrate barycentric monomials exactly") {
  const std::array<Eigen::Vector2d, 3> tri = {Eigen::Vector2d(0.1, -0.2),
                                              Eigen::Vector2d(1.3, 0.4),
                                              Eigen::Vector2d(0.3, 1.1)};
  const double area = oracle::polygon_area({tri[0], tri[1], tri[2]});
  // Affine lambda functions for monomial evaluation.
  const auto lambda = [&](int i, const Eigen::Vector2d& x) {
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k) m.row(k) << tri[k].x(), tri[k].y(), 1.0;
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    rhs[i] = 1.0;
    const Eigen::Vector3d sol = m.fullPivLu().solve(rhs);
    return sol[0] * x.x() + sol[1] * x.y() + sol[2];
  };

  for (int degree : {1, 2, 4, 5, 6}) {
    const QuadratureRule rule = map_to_triangle(triangle_rule(degree), tri[0], tri[1], tri[2]);
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        const int c = degree - a - b;
        double integral = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          integral += rule.weights[q] * std::pow(lambda(0, rule.points[q]), a) *
                      std::pow(lambda(1, rule.points[q]), b) *
                      std::pow(lambda(2, rule.points[q]), c);
        }
        const double exact = oracle::barycentric_power_integral(area, a, b, c);
        REQUIRE(integral == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("segment rule length and polynomial exactness") {
  const Eigen::Vector2d a(0.2, -1.0), b(1.4, 0.6);
  const QuadratureRule rule = segment_rule(a, b, 3);
  CHECK(rule.weight_sum() == doctest::Approx((b - a).norm()).epsilon(1e-14));

  // Degree-3 polynomial along the segment integrates exactly.
  const auto fn = [](const Eigen::Vector2d& p) { return p.x() * p.x() * p.x() + 2.0 * p.y(); };
  double integral = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) integral += rule.weights[q] * fn(rule.points[q]);
  CHECK(integral == doctest::Approx(oracle::integrate_segment(a, b, fn)).epsilon(1e-13));
}

TEST_CASE("polygon quadrature weight sum equals area") {
  const std::vector<Eigen::Vector2d> quad = {{0.0, 0.0}, {2.0, 0.0}, {2.5, 1.5}, {0.5, 1.0}};
  const QuadratureRule rule = polygon_quadrature(quad, 4);
  CHECK(rule.weight_sum() == doctest::Approx(oracle::polygon_area(quad)).epsilon(1e-13));
  for (double w : rule.weights) CHECK(w >= 0.0);
}
