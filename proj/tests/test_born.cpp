#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/born.hpp"
#include "lithoqed/oracle.hpp"

#include <cmath>

using namespace lithoqed;

namespace {

double rel(const Matrix3c& a, const Matrix3c& b) { return (a - b).norm() / b.norm(); }

const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};

}  // namespace

TEST_CASE("zero contrast and empty geometry") {
    QuadratureConfig q;
    auto geo = build_cube(1.0, MaterialModel::constant(1.0));
    CHECK(born_correction(mirror, geo, Vec3(0, 0, 2), Vec3(0, 0, 2), Complex(1.0), q).value.norm() == 0.0);
    DepositionGeometry none;
    CHECK(born_correction(mirror, none, Vec3(0, 0, 2), Vec3(0, 0, 2), Complex(1.0), q).value.norm() == 0.0);
}

TEST_CASE("domain errors") {
    QuadratureConfig q;
    auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    CHECK_THROWS_AS(born_correction(mirror, geo, Vec3(0, 0, 0.5), Vec3(0, 0, 0.5), Complex(1.0), q),
                    std::domain_error);
    // above and below the box at once: mixed ordering
    CHECK_THROWS_AS(born_correction(mirror, geo, Vec3(3, 0, 2), Vec3(3, 0, 0.5), Complex(1.0), q), std::domain_error);
    // level with the box needs the fixed truncation policy
    CHECK_THROWS_AS(born_correction(mirror, geo, Vec3(3, 0, 0.5), Vec3(3, 0, 0.5), Complex(1.0), q),
                    std::domain_error);
}

TEST_CASE("linear in the contrast") {
    QuadratureConfig q;
    q.rel_tol = 1e-5;
    const Vec3 r(0.3, 0.1, 1.6);
    auto a = born_correction(mirror, build_cube(1.0, MaterialModel::constant(1.8)), r, r, Complex(1.0), q);
    auto b = born_correction(mirror, build_cube(1.0, MaterialModel::constant(1.2)), r, r, Complex(1.0), q);
    CHECK(rel(a.value / 0.8, b.value / 0.2) < 1e-14);
}

TEST_CASE("analytic path against the Riemann oracle") {
    QuadratureConfig q;
    q.rel_tol = 1e-6;
    auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    const Vec3 r(0.2, -0.1, 2.0);
    auto a = born_correction(mirror, geo, r, r, Complex(1.0), q);
    OracleConfig oc;
    QuadratureConfig qq;
    qq.rel_tol = 1e-9;
    oc.cells_per_axis = 5;
    const double e5 = rel(born_correction_riemann(mirror, geo, r, r, Complex(1.0), oc, qq).value, a.value);
    oc.cells_per_axis = 10;
    const double e10 = rel(born_correction_riemann(mirror, geo, r, r, Complex(1.0), oc, qq).value, a.value);
    MESSAGE("riemann rel diff n=5 " << e5 << " n=10 " << e10);
    CHECK(e10 < 2e-3);
    CHECK(std::log2(e5 / e10) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("distinct field points, both orderings") {
    QuadratureConfig q;
    q.rel_tol = 1e-6;
    QuadratureConfig qq;
    qq.rel_tol = 1e-9;
    OracleConfig oc;
    oc.cells_per_axis = 10;
    // above a small box
    auto geo = build_cube(0.6, MaterialModel::constant(1.5));
    const Vec3 r(0.2, 0.1, 1.2), rp(-0.3, 0.2, 1.0);
    auto a = born_correction(mirror, geo, r, rp, Complex(1.3), q);
    auto o = born_correction_riemann(mirror, geo, r, rp, Complex(1.3), oc, qq);
    CHECK(rel(o.value, a.value) < 5e-3);
    // below a raised box
    DepositionGeometry raised;
    raised.boxes.push_back(DepositionBox({-0.3, 0.3}, {-0.3, 0.3}, {1.0, 1.6}));
    raised.material = MaterialModel::constant(1.5);
    const Vec3 s(0.1, 0.0, 0.5), sp(-0.1, 0.2, 0.4);
    auto b = born_correction(mirror, raised, s, sp, Complex(1.0), q);
    auto ob = born_correction_riemann(mirror, raised, s, sp, Complex(1.0), oc, qq);
    CHECK(rel(ob.value, b.value) < 5e-3);
}

TEST_CASE("polar and trapezoid angular rules agree at coincidence") {
    QuadratureConfig q;
    q.rel_tol = 1e-6;
    auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    const Vec3 r(0.9, 0.4, 1.3);
    BornRequest pol, trap;
    trap.angular = AngularRule::trapezoid;
    auto a = born_correction(mirror, geo, r, r, Complex(0.0, 0.7), q, pol);
    auto b = born_correction(mirror, geo, r, r, Complex(0.0, 0.7), q, trap);
    CHECK(rel(a.value, b.value) < 1e-5);
    // imaginary axis: real tensor
    CHECK(a.value.imag().norm() < 1e-12 * a.value.norm());
}

TEST_CASE("moment cache and frozen plans reproduce the adaptive result") {
    QuadratureConfig q;
    q.rel_tol = 1e-4;
    auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    const Vec3 r(0.4, 0.1, 1.3);
    BornRequest req;
    req.mask = diagonal_entries;
    MomentCache cache;
    BornPlan plan;
    auto a = born_correction(mirror, geo, r, r, Complex(0.0, 0.5), q, req, nullptr, &plan, &cache);
    auto b = born_correction(mirror, geo, r, r, Complex(0.0, 0.5), q, req, &plan, nullptr, &cache);
    CHECK(cache.hits > 0);
    CHECK(a.value == b.value);
    auto c = born_correction(mirror, geo, r, r, Complex(0.0, 0.5), q, req);
    CHECK(rel(c.value, a.value) < 1e-14);
    // masked entries stay zero
    CHECK(a.value(0, 1) == Complex(0.0));
    CHECK(a.value(0, 2) == Complex(0.0));
}

TEST_CASE("whole variant adds the reflection-free term") {
    QuadratureConfig q;
    q.rel_tol = 1e-5;
    auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    const Vec3 r(0.0, 0.0, 1.5);
    BornRequest whole;
    whole.variant = BornVariant::whole;
    const HalfSpaceEnvironment vac{MaterialModel::vacuum()};
    CHECK(born_correction(vac, geo, r, r, Complex(1.0), q).value.norm() == 0.0);
    auto w = born_correction(vac, geo, r, r, Complex(1.0), q, whole);
    CHECK(w.value.norm() > 0.0);
    OracleConfig oc;
    QuadratureConfig qq;
    qq.rel_tol = 1e-9;
    oc.cells_per_axis = 10;
    const double e10 = rel(born_correction_riemann(vac, geo, r, r, Complex(1.0), oc, qq, false).value, w.value);
    oc.cells_per_axis = 20;
    const double e20 = rel(born_correction_riemann(vac, geo, r, r, Complex(1.0), oc, qq, false).value, w.value);
    CHECK(e20 < 5e-3);
    CHECK(std::log2(e10 / e20) == doctest::Approx(2.0).epsilon(0.15));
}
