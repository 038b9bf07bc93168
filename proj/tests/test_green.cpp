#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/green.hpp"

#include <random>

using namespace lithoqed;
using doctest::Approx;

namespace {
QuadratureConfig tight() {
    QuadratureConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-14;
    c.max_subdivisions = 400;
    return c;
}
double rel(const Matrix3c& a, const Matrix3c& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("vacuum closed form") {
    auto g = vacuum_gf(Vec3(0, 0, 2), Vec3(0, 0, 1), Frequency::real(1.0));
    Complex expect = std::exp(I) * (1.0 - I) / (2 * pi);
    CHECK(std::abs(g.entries(2, 2) - expect) < 1e-14);
    CHECK_THROWS_AS(vacuum_gf(Vec3(0, 0, 1), Vec3(0, 0, 1), Frequency::real(1.0)), std::domain_error);
    auto im = vacuum_gf_im_coincident(1.0, tight());
    for (int i = 0; i < 3; ++i) CHECK(im.value(i, i).real() == Approx(1 / (6 * pi)).epsilon(1e-10));
    CHECK(std::abs(im.value(0, 1)) < 1e-14);
    // small-separation limit of Im W approaches w/6pi
    auto near = vacuum_gf(Vec3(0, 0, 1 + 1e-4), Vec3(0, 0, 1), Frequency::real(1.0));
    CHECK(near.entries(2, 2).imag() == Approx(1 / (6 * pi)).epsilon(1e-6));
}

TEST_CASE("R -> 0 reduction reproduces the vacuum tensor") {
    HalfSpaceEnvironment env{MaterialModel::vacuum()};
    for (Complex w : {Complex(1.0, 0.0), Complex(0.0, 0.7)}) {
        Vec3 r(0.3, -0.2, 1.4), rp(-0.1, 0.4, 0.9);
        auto q = halfspace_gf(env, r, rp, w, GreenPart::whole, tight(), FreePart::quadrature);
        auto c = vacuum_gf(r, rp, w);
        CHECK(rel(q.entries, c.entries) < 1e-7);
        auto s = halfspace_gf(env, r, rp, w, GreenPart::scattering, tight());
        CHECK(s.entries.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("mirror image check against closed form") {
    // perfect mirror: G(r, r') = W_vac(r, r'*) diag(-1, -1, 1)
    HalfSpaceEnvironment env{MaterialModel::perfect_mirror()};
    Vec3 r(0.2, 0.1, 0.8), rp(-0.3, 0.25, 0.5);
    for (Complex w : {Complex(1.0, 0.0), Complex(0.0, 1.3)}) {
        auto g = halfspace_gf(env, r, rp, w, GreenPart::scattering, tight());
        Vec3 img(rp.x(), rp.y(), -rp.z());
        Matrix3c ref = vacuum_gf(r, img, w).entries * Eigen::Vector3cd(-1, -1, 1).asDiagonal();
        CHECK(rel(g.entries, ref) < 1e-8);
    }
}

TEST_CASE("coincident zz scattering part matches the perpendicular closed form") {
    HalfSpaceEnvironment env{MaterialModel::perfect_mirror()};
    for (double z : {0.1, 1.0, 3.0}) {
        auto g = halfspace_gf(env, Vec3(0, 0, z), Vec3(0, 0, z), Complex(1.0, 0.0), GreenPart::scattering, tight());
        auto [par, perp] = halfspace_decay_closed_forms(z, 1.0);
        CHECK(2 * g.entries(2, 2).imag() == Approx(perp).epsilon(1e-7));
        CHECK(2 * g.entries(0, 0).imag() == Approx(par).epsilon(1e-7));
    }
    auto [par, perp] = halfspace_decay_closed_forms(1.0, 1.0);
    CHECK(perp == Approx((std::sin(2.0) - 2 * std::cos(2.0)) / (8 * pi)).epsilon(1e-14));
    CHECK(perp == Approx(0.069297).epsilon(1e-5));
    (void)par;
}

TEST_CASE("reciprocity and imaginary-axis reality") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0), h(0.2, 1.5);
    for (auto m : {MaterialModel::constant(1.8), MaterialModel::perfect_mirror()}) {
        HalfSpaceEnvironment env{m};
        for (int i = 0; i < 5; ++i) {
            Vec3 r(u(rng), u(rng), h(rng)), rp(u(rng), u(rng), h(rng));
            auto a = halfspace_gf(env, r, rp, Complex(1.0, 0.0), GreenPart::whole, tight());
            auto b = halfspace_gf(env, rp, r, Complex(1.0, 0.0), GreenPart::whole, tight());
            CHECK(rel(a.entries, b.entries.transpose()) < 1e-8);
            auto c = halfspace_gf(env, r, rp, Complex(0.0, 0.8), GreenPart::scattering, tight());
            CHECK(c.entries.imag().cwiseAbs().maxCoeff() <= 1e-12 * c.entries.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("scattering part decays with height on the imaginary axis") {
    HalfSpaceEnvironment env{MaterialModel::constant(1.8)};
    double prev = 1e300;
    for (double z = 1.0; z < 6.0; z += 0.5) {
        auto g = halfspace_gf(env, Vec3(0, 0, z), Vec3(0, 0, z), Complex(0, 1.0), GreenPart::scattering, tight());
        double v = std::abs(g.entries(2, 2).real());
        CHECK(v < prev);
        prev = v;
    }
}
