#include <catch_amalgamated.hpp>

#include <cmath>

#include "affgeo/charts.hpp"
#include "affgeo/hypersurface.hpp"
#include "affgeo/operators.hpp"
#include "affgeo/reilly.hpp"
#include "affgeo/weights.hpp"

using namespace affgeo;
using Catch::Approx;

namespace {

ScalarField<2> coord_field(int i) {
  return ScalarField<2>([i](const auto& x) { return x[i]; });
}

template <int N>
ScalarField<N> height(const ChartedManifold<N>& m) {
  return m.embedding().back();
}

// z + 0.1 x on a sphere chart
ScalarField<2> tilted_height(const ChartedManifold<2>& m) {
  const ScalarField<2> x = m.embedding()[0];
  const ScalarField<2> z = m.embedding()[2];
  return ScalarField<2>([x, z](const auto& p) { return z(p) + 0.1 * x(p); });
}

}  // namespace

TEST_CASE("affine gradient", "[operators]") {
  const auto s2 = round_sphere_chart<2>();
  const auto phi = height<2>(s2);
  for (const auto& p : sample_points<2>(s2, 20)) {
    const auto ordinary = inverse<double, 2>(s2.g(p)) * gradient<double, 2>(phi, p);
    const auto g0 = grad_D<2>(s2, {0.4, -0.2}, phi, p);
    const auto ws = with_weight<2>(s2, WeightSpec{"zpow", 0.3, 1, 0});
    const auto g1 = grad_D<2>(ws, {0.3, 0.3}, phi, p);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(g0[k] - ordinary[k]) <= 1e-14);
      CHECK(std::abs(g1[k] - ordinary[k]) <= 1e-14);
    }
  }
  const auto e = with_weight<2>(euclidean_chart<2>(), WeightSpec{"coord", 1.0, 1, 0});
  const auto a = grad_D<2>(e, {0.0, 1.0}, coord_field(0), {0.0, 0.0});
  CHECK(a[0] == Approx(1.0));
  CHECK(a[1] == 0.0);
  const auto b = grad_D<2>(e, {0.0, 1.0}, coord_field(0), {1.0, 0.0});
  CHECK(b[0] == Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(b[1] == 0.0);
}

TEST_CASE("affine Hessian", "[operators]") {
  const auto s2 = round_sphere_chart<2>();
  const auto ws = with_weight<2>(s2, WeightSpec{"zpow", 0.3, 1, 0});
  const auto phi = tilted_height(s2);
  SECTION("reduces to the Levi-Civita Hessian") {
    for (const auto& p : sample_points<2>(s2, 20)) {
      const auto lc = levi_civita_hessian<2>(s2, phi, p);
      CHECK(max_abs_diff<2>(hess_D_matrix<2>(s2, {0.4, 0.7}, phi, p), lc) <= 1e-12);
      const auto sc = with_weight<2>(s2, WeightSpec{"const", 0.6, 1, 0});
      // constant u leaves only the overall factor V^{β−α}
      const auto h = hess_D_matrix<2>(sc, {0.4, 0.7}, phi, p);
      CHECK(max_abs_diff<2>(h, [&] {
              Mat<double, 2> m = lc;
              for (auto& v : m.a) v *= std::exp(0.3 * 0.6);
              return m;
            }()) <= 1e-12);
    }
  }
  SECTION("constant function") {
    for (const auto& p : sample_points<2>(ws, 10))
      CHECK(hess_D<2>(ws, {0.4, -0.2}, constant_field<2>(2.0), p).max_abs() == 0.0);
  }
  SECTION("trace equals the affine Laplacian, Hessian is symmetric") {
    const WeightParams q{0.4, -0.2};
    for (const auto& p : sample_points<2>(ws, 50)) {
      const auto h = hess_D_matrix<2>(ws, q, phi, p);
      CHECK(std::abs(trace_with<2>(inverse<double, 2>(ws.g(p)), h) - lap_D<2>(ws, q, phi, p)) <= 1e-10);
      CHECK(asymmetry<2>(h) <= 1e-12);
    }
    const auto s3 = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
    const ScalarField<3> z3 = height<3>(s3);
    const ScalarField<3> f3([z3](const auto& x) { return z3(x) * z3(x) + sin(x[2]); });
    for (const auto& p : sample_points<3>(s3, 50)) {
      const auto h = hess_D_matrix<3>(s3, q, f3, p);
      CHECK(std::abs(trace_with<3>(inverse<double, 3>(s3.g(p)), h) - lap_D<3>(s3, q, f3, p)) <= 1e-10);
    }
  }
}

TEST_CASE("affine Laplacian", "[operators]") {
  SECTION("first spherical harmonic") {
    const auto s2 = round_sphere_chart<2>();
    for (const auto& p : sample_points<2>(s2, 30))
      CHECK(std::abs(lap_D<2>(s2, {0.0, 0.0}, height<2>(s2), p) + 2.0 * std::cos(p[0])) <= 1e-10);
    const auto s3 = round_sphere_chart<3>();
    for (const auto& p : sample_points<3>(s3, 30))
      CHECK(std::abs(lap_D<3>(s3, {0.0, 0.0}, height<3>(s3), p) + 3.0 * std::cos(p[0])) <= 1e-10);
  }
  SECTION("flat substitution") {
    const auto e = with_weight<2>(euclidean_chart<2>(), WeightSpec{"coord", 1.0, 1, 0});
    const ScalarField<2> phi([](const auto& x) { return x[0] * x[0]; });
    CHECK(lap_D<2>(e, {1.0, 0.0}, phi, {0.0, 0.0}) == Approx(2.0).epsilon(1e-14));
    for (const auto& p : sample_points<2>(e, 10))
      CHECK(lap_D<2>(e, {1.0, 0.0}, phi, p) == Approx(std::exp(-p[0]) * (2.0 + 4.0 * p[0])).epsilon(1e-13));
  }
  SECTION("constant weight reduces to Laplace-Beltrami") {
    const auto s2 = round_sphere_chart<2>();
    const auto sc = with_weight<2>(s2, WeightSpec{"const", 0.0, 1, 0});
    const auto phi = tilted_height(s2);
    for (const auto& p : sample_points<2>(sc, 20))
      CHECK(std::abs(lap_D<2>(sc, {0.3, 0.9}, phi, p) - laplace_beltrami<2>(s2, phi, p)) <= 1e-12);
  }
}

TEST_CASE("hypersurface normals and second fundamental form", "[operators][hypersurface]") {
  SECTION("equators are totally geodesic") {
    const auto s2 = round_sphere_chart<2>();
    const auto eq = latitude_hypersurface<2>(s2, kPi / 2);
    for (const auto& s : sample_points<1>(eq.parameters, 10)) {
      const auto e = second_fundamental<2>(eq, {0.5, 0.3}, s);
      CHECK(std::abs(e.II(0, 0)) <= 1e-14);
      CHECK(std::abs(e.H) <= 1e-14);
      CHECK(std::abs(e.H_D) <= 1e-14);
      CHECK(normal_residual<2>(eq, s) <= 1e-12);
    }
    const auto eq3 = latitude_hypersurface<3>(round_sphere_chart<3>(), kPi / 2);
    for (const auto& s : sample_points<2>(eq3.parameters, 20)) {
      const auto e = second_fundamental<3>(eq3, {0.5, 0.3}, s);
      CHECK(std::abs(e.H_D) <= 1e-13);
      CHECK(normal_residual<3>(eq3, s) <= 1e-12);
    }
  }
  SECTION("latitude circle") {
    const auto lat = latitude_hypersurface<2>(round_sphere_chart<2>(), kPi / 3);
    const auto e = second_fundamental<2>(lat, {0.0, 0.0}, {0.4});
    CHECK(std::abs(e.H) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
    CHECK(d_minimal_residual<2>(lat, {0.4, 0.1}) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));
  }
  SECTION("flat circles and spheres have H = (n−1)/r") {
    const auto c = chart_circle(euclidean_chart<2>(), {0.2, -0.1}, 0.7);
    for (const auto& s : sample_points<1>(c.parameters, 10)) {
      CHECK(second_fundamental<2>(c, {}, s).H == Approx(1.0 / 0.7).epsilon(1e-13));
      CHECK(normal_residual<2>(c, s) <= 1e-12);
    }
    const auto sp = chart_sphere(euclidean_chart<3>(), 1.5);
    for (const auto& s : sample_points<2>(sp.parameters, 20)) {
      CHECK(second_fundamental<3>(sp, {}, s).H == Approx(2.0 / 1.5).epsilon(1e-12));
      CHECK(normal_residual<3>(sp, s) <= 1e-12);
    }
  }
  SECTION("D-minimality of the equator depends on the parity of u") {
    const auto s2 = round_sphere_chart<2>();
    const auto even = latitude_hypersurface<2>(with_weight<2>(s2, WeightSpec{"zpow", 0.1, 2, 0}), kPi / 2);
    CHECK(d_minimal_residual<2>(even, {1.0, 0.0}) <= 1e-10);
    const auto even3 =
        latitude_hypersurface<3>(with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0}), kPi / 2);
    CHECK(d_minimal_residual<3>(even3, {0.4, 0.1}) <= 1e-10);
    // u = a z: u_ν = −a on the equator, so H^D = −(n−1) α a
    const auto odd = latitude_hypersurface<2>(with_weight<2>(s2, WeightSpec{"zpow", 0.3, 1, 0}), kPi / 2);
    CHECK(d_minimal_residual<2>(odd, {0.5, 0.0}) == Approx(0.15).epsilon(1e-12));
    CHECK(second_fundamental<2>(odd, {0.5, 0.2}, {1.0}).u_nu == Approx(-0.3).epsilon(1e-13));
  }
  SECTION("degenerate parametrization") {
    Hypersurface<2> bad = chart_circle(euclidean_chart<2>(), {0.0, 0.0}, 1.0);
    bad.embedding = MapField<1, 2>([](const auto& t) {
      using S = std::decay_t<decltype(t[0])>;
      return Vec<S, 2>{S(0.3), S(0.2) + 0.0 * t[0]};
    });
    try {
      (void)second_fundamental<2>(bad, {}, {0.5});
      FAIL("expected DegenerateJacobian");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateJacobian);
    }
  }
}

TEST_CASE("hypersurface affine Laplacian", "[operators][hypersurface]") {
  // on the unit circle ψ = x restricted is cos t with Δψ = −cos t;
  // with u = a x and (α, β) the drift term adds (α + 2β) h(∇u, ∇ψ) = (α + 2β) a sin² t
  const auto e = with_weight<2>(euclidean_chart<2>(), WeightSpec{"coord", 0.3, 1, 0});
  const auto c = chart_circle(e, {0.0, 0.0}, 1.0);
  const WeightParams q{0.4, -0.1};
  for (const auto& s : sample_points<1>(c.parameters, 10)) {
    const double t = s[0];
    const double expect =
        std::exp(-(q.alpha - q.beta) * 0.3 * std::cos(t)) * (-std::cos(t) + (q.alpha + 2 * q.beta) * 0.3 * std::pow(std::sin(t), 2));
    CHECK(lap_D_hypersurface<2>(c, q, coord_field(0), s) == Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("quadrature rules", "[operators][quadrature]") {
  for (int n = 1; n <= 12; ++n) {
    const auto g = gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) <= 1e-14);
    }
  }
  const auto r = box_rule<2>({0.0, 0.0}, {1.0, 2.0}, 3, 4);
  double area = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    area += r.weights[i];
    moment += r.weights[i] * r.points[i][0] * r.points[i][1] * r.points[i][1];
  }
  CHECK(area == Approx(2.0).epsilon(1e-14));
  CHECK(moment == Approx(0.5 * 8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("Reilly identity on a flat disk", "[operators][reilly]") {
  const auto region = disk_region(euclidean_chart<2>(), {0.0, 0.0}, 1.0);
  CHECK(normal_points_outward<2>(region));
  const ScalarField<2> f1 = coord_field(0);
  const ScalarField<2> f2([](const auto& x) { return x[0] * x[0] * x[1] - 0.5 * x[1] * x[1]; });
  const ScalarField<2> f3([](const auto& x) { return exp(0.3 * x[0]) * sin(x[1] + 0.2); });
  const auto r1 = reilly_residual<2>(region, {}, f1);
  CHECK(std::abs(r1.lhs) <= 1e-12);
  CHECK(r1.residual <= 1e-8);
  CHECK(reilly_residual<2>(region, {}, f2).residual <= 1e-8);
  CHECK(reilly_residual<2>(region, {}, f3).residual <= 1e-8);
  // an off-centre disk exercises the same identity with a nonradial φ
  const auto shifted = disk_region(euclidean_chart<2>(), {0.3, -0.2}, 0.8);
  CHECK(reilly_residual<2>(shifted, {}, f3).residual <= 1e-8);
}

TEST_CASE("Reilly identity on the upper hemisphere", "[operators][reilly]") {
  const auto st = stereographic_sphere_chart();
  SECTION("unweighted, phi = z") {
    const auto region = disk_region(st, {0.0, 0.0}, 1.0);
    CHECK(normal_points_outward<2>(region));
    const auto r = reilly_residual<2>(region, {}, height<2>(st));
    CHECK(r.residual <= 1e-6);
    // the bulk integrand is 3z² − 1, whose hemisphere integral vanishes
    CHECK(std::abs(r.lhs) <= 1e-10);
    const ScalarField<2> f([](const auto& x) { return exp(0.3 * x[0]) * sin(x[1] + 0.2); });
    const auto r2 = reilly_residual<2>(region, {}, f);
    CHECK(r2.residual <= 1e-6);
    CHECK(std::abs(r2.lhs) > 1e-3);
  }
  SECTION("weighted with every term active") {
    const auto ws = with_weight<2>(st, WeightSpec{"zpow", 0.2, 1, 0});
    const auto region = disk_region(ws, {0.0, 0.0}, 1.0);
    const WeightParams q{0.5, 0.3};
    const auto phi = tilted_height(ws);
    const auto ref = reilly_residual<2>(region, q, phi);
    CHECK(ref.residual <= 1e-5);

    const auto levels = reilly_refinement<2>(region, q, phi, 2, {8, 16, 32});
    REQUIRE(levels.size() == 3);
    CHECK(levels[1].error < levels[0].error);
    CHECK(levels[2].error < levels[1].error);
    CHECK(levels[2].observed_order >= 2.0);

    // the identity is sensitive to the normal orientation
    auto flipped = region;
    flipped.boundary.orientation = -1;
    CHECK_FALSE(normal_points_outward<2>(flipped));
    CHECK(reilly_residual<2>(flipped, q, phi).residual > 1e-3);
  }
  SECTION("worker count does not change the sums") {
    const auto ws = with_weight<2>(st, WeightSpec{"zpow", 0.2, 1, 0});
    const auto region = disk_region(ws, {0.0, 0.0}, 1.0, 4, 6);
    const auto a = reilly_residual<2>(region, {0.5, 0.3}, height<2>(ws), 1);
    const auto b = reilly_residual<2>(region, {0.5, 0.3}, height<2>(ws), 3);
    CHECK(a.lhs == b.lhs);
    CHECK(a.rhs == b.rhs);
  }
}
