#include <catch_amalgamated.hpp>

#include <cmath>

#include "affgeo/charts.hpp"
#include "affgeo/curvature.hpp"
#include "affgeo/weights.hpp"

using namespace affgeo;

namespace {

template <int N>
double max_diff_scaled(const Mat<double, N>& a, const Mat<double, N>& b, double s) {
  double r = 0.0;
  for (int i = 0; i < N * N; ++i) r = std::max(r, std::abs(a.a[i] - s * b.a[i]));
  return r;
}

const std::array<ConnectionSpec, 3> kinds(WeightParams p) {
  return {ConnectionSpec::levi_civita(), ConnectionSpec::lixia(p), ConnectionSpec::dual(p)};
}

}  // namespace

TEST_CASE("flat chart has zero curvature", "[curvature]") {
  const auto e = euclidean_chart<2>();
  const auto e3 = euclidean_chart<3>();
  for (const auto& spec : kinds({0.4, -0.2})) {
    CHECK(riemann_tensor<2>(spec, e, {0.3, -0.7}).max_abs() == 0.0);
    CHECK(riemann_tensor<3>(spec, e3, {0.3, -0.7, 1.1}).max_abs() == 0.0);
  }
}

TEST_CASE("round sphere curvature", "[curvature]") {
  const auto s2 = round_sphere_chart<2>();
  const auto s3 = round_sphere_chart<3>();
  const auto lc = ConnectionSpec::levi_civita();
  for (const auto& p : sample_points<2>(s2, 50)) {
    CHECK(std::abs(sectional_curvature<2>(lc, s2, p, {1.0, 0.0}, {0.0, 1.0}) - 1.0) <= 1e-10);
    CHECK(std::abs(sectional_curvature<2>(lc, s2, p, {0.3, -1.2}, {2.0, 0.5}) - 1.0) <= 1e-10);
    CHECK(max_diff_scaled<2>(ricci_matrix<2>(lc, s2, p), s2.g(p), 1.0) <= 1e-10);
  }
  for (const auto& p : sample_points<3>(s3, 50)) {
    CHECK(max_diff_scaled<3>(ricci_matrix<3>(lc, s3, p), s3.g(p), 2.0) <= 1e-10);
    CHECK(std::abs(sectional_curvature<3>(lc, s3, p, {0.2, 1.0, -0.4}, {1.0, 0.0, 0.7}) - 1.0) <= 1e-10);
  }
}

TEST_CASE("first Bianchi identity for torsion-free coefficients", "[curvature][property]") {
  const auto s3 = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
  for (const auto& spec : kinds({0.4, 0.1}))
    for (const auto& p : sample_points<3>(s3, 30)) CHECK(bianchi_residual<3>(spec, s3, p) <= 1e-10);
}

TEST_CASE("constant weight leaves Ricci unchanged", "[curvature]") {
  const auto s2 = round_sphere_chart<2>();
  const auto sc = with_weight<2>(s2, WeightSpec{"const", 0.8, 1, 0});
  for (const auto& p : sample_points<2>(sc, 20)) {
    const auto ric = ricci_matrix<2>(ConnectionSpec::levi_civita(), s2, p);
    for (const auto& spec : kinds({0.7, -0.3})) CHECK(max_abs_diff<2>(ricci_matrix<2>(spec, sc, p), ric) <= 1e-12);
  }
}

TEST_CASE("coordinate trace equals orthonormal frame sum", "[curvature][property]") {
  const auto s2 = with_weight<2>(round_sphere_chart<2>(), WeightSpec{"zpow", 0.3, 1, 0});
  const auto s3 = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
  const auto st = with_weight<2>(stereographic_sphere_chart(), WeightSpec{"coord", 0.25, 1, 0});
  for (const auto& spec : kinds({0.4, -0.2})) {
    for (const auto& p : sample_points<2>(s2, 40))
      CHECK(max_abs_diff<2>(ricci_matrix<2>(spec, s2, p), ricci_frame_sum<2>(spec, s2, p)) <= 1e-11);
    for (const auto& p : sample_points<2>(st, 40))
      CHECK(max_abs_diff<2>(ricci_matrix<2>(spec, st, p), ricci_frame_sum<2>(spec, st, p)) <= 1e-11);
    for (const auto& p : sample_points<3>(s3, 40))
      CHECK(max_abs_diff<3>(ricci_matrix<3>(spec, s3, p), ricci_frame_sum<3>(spec, s3, p)) <= 1e-11);
  }
}

TEST_CASE("Li-Xia Ricci and its dual are symmetric", "[curvature][property]") {
  const auto s2 = with_weight<2>(round_sphere_chart<2>(), WeightSpec{"zpow", 0.3, 1, 0});
  const auto s3 = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
  for (const WeightParams q : {WeightParams{0.4, -0.2}, WeightParams{1.0, 0.0}, WeightParams{0.0, 1.0}}) {
    for (const auto& p : sample_points<2>(s2, 40)) {
      CHECK(asymmetry<2>(ricci_matrix<2>(ConnectionSpec::lixia(q), s2, p)) <= 1e-9);
      CHECK(asymmetry<2>(ricci_matrix<2>(ConnectionSpec::dual(q), s2, p)) <= 1e-9);
    }
    for (const auto& p : sample_points<3>(s3, 40)) {
      CHECK(asymmetry<3>(ricci_matrix<3>(ConnectionSpec::lixia(q), s3, p)) <= 1e-9);
      CHECK(asymmetry<3>(ricci_matrix<3>(ConnectionSpec::dual(q), s3, p)) <= 1e-9);
    }
  }
}

TEST_CASE("static Ricci tensor", "[curvature][oracle]") {
  SECTION("zero weight gives Ricci") {
    const auto s2 = round_sphere_chart<2>();
    for (const auto& p : sample_points<2>(s2, 10))
      CHECK(max_abs_diff<2>(static_ricci_matrix<2>(s2, p), ricci_matrix<2>(ConnectionSpec::levi_civita(), s2, p)) <=
            1e-13);
  }
  SECTION("flat chart with radial weight at the origin") {
    const auto e = with_weight<2>(euclidean_chart<2>(), WeightSpec{"radial", 1.0, 1, 0});
    const auto m = static_ricci_matrix<2>(e, {0.0, 0.0});
    CHECK(max_abs_diff<2>(m, Mat<double, 2>::identity()) <= 1e-14);
  }
  SECTION("agrees with the Li-Xia Ricci at (0, 1)") {
    const auto s2 = with_weight<2>(round_sphere_chart<2>(), WeightSpec{"zpow", 0.3, 1, 0});
    const auto s3 = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
    const auto spec = ConnectionSpec::lixia({0.0, 1.0});
    for (const auto& p : sample_points<2>(s2, 50))
      CHECK(max_abs_diff<2>(static_ricci_matrix<2>(s2, p), ricci_matrix<2>(spec, s2, p)) <= 1e-9);
    for (const auto& p : sample_points<3>(s3, 50))
      CHECK(max_abs_diff<3>(static_ricci_matrix<3>(s3, p), ricci_matrix<3>(spec, s3, p)) <= 1e-9);
  }
}

TEST_CASE("N-weighted Ricci tensor", "[curvature][oracle]") {
  const auto s2 = round_sphere_chart<2>();
  const ScalarField<2> z = s2.embedding().back();
  const ScalarField<2> f([z](const auto& x) { return 0.3 * z(x); });

  SECTION("constant f gives Ricci for every admissible N") {
    const auto c = constant_field<2>(1.5);
    for (const auto& p : sample_points<2>(s2, 10)) {
      const auto ric = ricci_matrix<2>(ConnectionSpec::levi_civita(), s2, p);
      for (double n : std::initializer_list<double>{-3.0, 0.0, 1.0, 2.0, 5.0, INFINITY, -INFINITY})
        CHECK(max_abs_diff<2>(weighted_ricci_matrix<2>(s2, c, n, p), ric) <= 1e-13);
    }
  }
  SECTION("N = infinity is Ricci plus Hessian") {
    // Hess z = -z g on the unit sphere, so Ric + Hess(0.3 z) = (1 - 0.3 z) g
    for (const auto& p : sample_points<2>(s2, 20))
      CHECK(max_diff_scaled<2>(weighted_ricci_matrix<2>(s2, f, INFINITY, p), s2.g(p), 1.0 - 0.3 * std::cos(p[0])) <=
            1e-12);
  }
  SECTION("N = 1 agrees with the Li-Xia Ricci at (1/(n-1), 0), u = -f") {
    const auto m2 = s2.with_weight(ScalarField<2>([f](const auto& x) { return -f(x); }));
    for (const auto& p : sample_points<2>(s2, 50))
      CHECK(max_abs_diff<2>(weighted_ricci_matrix<2>(s2, f, 1.0, p),
                            ricci_matrix<2>(ConnectionSpec::lixia({1.0, 0.0}), m2, p)) <= 1e-9);
    const auto s3 = round_sphere_chart<3>();
    const ScalarField<3> z3 = s3.embedding().back();
    const ScalarField<3> f3([z3](const auto& x) { return 0.2 * z3(x) * z3(x) - 0.1 * z3(x); });
    const auto m3 = s3.with_weight(ScalarField<3>([f3](const auto& x) { return -f3(x); }));
    for (const auto& p : sample_points<3>(s3, 50))
      CHECK(max_abs_diff<3>(weighted_ricci_matrix<3>(s3, f3, 1.0, p),
                            ricci_matrix<3>(ConnectionSpec::lixia({0.5, 0.0}), m3, p)) <= 1e-9);
  }
  SECTION("excluded values of N") {
    const Vec<double, 2> p{1.0, 0.5};
    try {
      (void)weighted_ricci_matrix<2>(s2, f, 1.5, p);
      FAIL("expected InvalidN");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidN);
    }
    try {
      (void)weighted_ricci_matrix<2>(s2, f, 2.0, p);
      FAIL("expected NonConstantFAtNEqualsN");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonConstantFAtNEqualsN);
    }
  }
}

TEST_CASE("curvature bound scan", "[curvature][scan]") {
  SECTION("round spheres") {
    const auto r3 = curvature_bound_scan<3>(round_sphere_chart<3>(), {0.0, 0.0}, 64);
    CHECK(std::abs(r3.K_best - 2.0) <= 1e-10);
    CHECK(r3.asymmetry <= 1e-10);
    const auto r2 = curvature_bound_scan<2>(round_sphere_chart<2>(), {0.4, 0.1}, 64);
    CHECK(std::abs(r2.K_best - 1.0) <= 1e-10);
  }
  SECTION("weighted sphere against the closed form") {
    // (α, β) = (1, 0) on S² is Ric − Hess u + du⊗du. With u = a z²,
    // Hess z = −z g and |dz|² = 1 − z², the eigenvalues relative to g are
    // 1 + 2a z² and 1 + 2a z² + (4a² z² − 2a)(1 − z²).
    const double a = 0.1;
    const auto m = with_weight<2>(round_sphere_chart<2>(), WeightSpec{"zpow", a, 2, 0});
    const auto rep = curvature_bound_scan<2>(m, {1.0, 0.0}, 200);
    double oracle_min = INFINITY;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      const double zz = std::cos(rep.points[i][0]);
      const double e1 = 1 + 2 * a * zz * zz;
      const double e2 = e1 + (4 * a * a * zz * zz - 2 * a) * (1 - zz * zz);
      const double lam = std::min(e1, e2) * std::exp(-a * zz * zz);
      CHECK(std::abs(rep.lambda_min[i] - lam) <= 1e-9);
      oracle_min = std::min(oracle_min, lam);
    }
    CHECK(std::abs(rep.K_best - oracle_min) <= 1e-9);
    // the infimum over the sphere is 1 − 2a at the equator
    CHECK(rep.K_best >= 0.8 - 1e-12);
    CHECK(rep.K_best <= 0.8 + 1e-3);
    // the first Halton sample sits on the equator
    CHECK(rep.K_best == Catch::Approx(0.8).margin(1e-12));
  }
  SECTION("K_best never exceeds a pointwise bound, argmin is reported") {
    const auto m = with_weight<3>(round_sphere_chart<3>(), WeightSpec{"zpow", 0.2, 2, 0});
    const auto rep = curvature_bound_scan<3>(m, {0.4, 0.1}, 80);
    bool found = false;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      CHECK(rep.K_best <= rep.lambda_min[i]);
      if (rep.points[i] == rep.argmin) found = rep.lambda_min[i] == rep.K_best;
    }
    CHECK(found);
  }
  SECTION("result does not depend on worker count") {
    const auto m = with_weight<2>(round_sphere_chart<2>(), WeightSpec{"zpow", 0.3, 1, 0});
    const auto a = curvature_bound_scan<2>(m, {0.4, -0.2}, 100, 1);
    const auto b = curvature_bound_scan<2>(m, {0.4, -0.2}, 100, 4);
    CHECK(a.K_best == b.K_best);
    CHECK(a.lambda_min == b.lambda_min);
    CHECK(a.asymmetry == b.asymmetry);
  }
}
