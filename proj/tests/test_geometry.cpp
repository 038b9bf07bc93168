#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/geometry.hpp"

#include <random>

using namespace lithoqed;
using doctest::Approx;

TEST_CASE("cube") {
    auto g = build_cube(1.0);
    REQUIRE(g.boxes.size() == 1);
    CHECK(g.volume() == Approx(1.0));
    CHECK(g.boxes[0].z.lo == 0.0);
    CHECK(g.boxes[0].z.hi == 1.0);
    CHECK(build_cube(2.0).volume() == Approx(8.0));
    Vec3 c = g.boxes[0].centroid();
    CHECK(c.x() == 0.0);
    CHECK(c.y() == 0.0);
    CHECK(c.z() == 0.5);
    CHECK_THROWS_AS(build_cube(0.0), std::domain_error);
}

TEST_CASE("grating") {
    GratingSpec s;
    CHECK(s.x0() == Approx(-4.25));
    auto g = build_grating(s);
    const double lo[] = {-4.25, -2.25, -0.25, 1.75, 3.75};
    REQUIRE(g.boxes.size() == 5);
    for (int n = 0; n < 5; ++n) {
        CHECK(g.boxes[n].x.lo == Approx(lo[n]));
        CHECK(g.boxes[n].x.hi == Approx(lo[n] + 1.0));
        CHECK(g.boxes[n].y.lo == Approx(-2.5));
    }
    CHECK(g.volume() == Approx(25.0));
    GratingSpec one{1, 1.0, 1.0, 1.0, {}};
    CHECK(build_grating(one).volume() == Approx(1.0));
    GratingSpec shifted = s;
    shifted.x0_override = -4.5;
    CHECK(build_grating(shifted).boxes[0].x.lo == Approx(-4.5));
    CHECK_NOTHROW(g.validate());
    CHECK(g.contains(Vec3(0.0, 0.0, 0.5)));
    CHECK_FALSE(g.contains(Vec3(1.0, 0.0, 0.5)));
}

TEST_CASE("contrast and warnings") {
    auto g = build_cube(1.0, MaterialModel::constant(1.8));
    CHECK(g.delta_eps(1.0).real() == Approx(0.8));
    CHECK(g.warnings(1.0).empty());
    auto strong = build_cube(1.0, MaterialModel::constant(2.5));
    CHECK(strong.warnings(1.0).size() == 1);
    DepositionGeometry bad;
    bad.boxes.emplace_back(Interval{0, 1}, Interval{0, 1}, Interval{0, 1});
    bad.boxes.emplace_back(Interval{0.5, 1.5}, Interval{0, 1}, Interval{0, 1});
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("structure factor") {
    DepositionBox box(Interval{-0.5, 0.5}, Interval{-0.3, 0.7}, Interval{0.0, 1.0});
    WaveContext c(Complex(0, 1.0), 0.0, 0.0), cp(Complex(0, 1.0), 0.0, 0.0);
    // k = k' = 0 in plane, but k_z + k_z' = 2i: z factor (1 - e^{-2})/2
    Complex sf = structure_factor(box, c, cp);
    CHECK(sf.real() == Approx((1 - std::exp(-2.0)) / 2).epsilon(1e-13));
    // zero phase gives the volume
    CHECK(phase_integral(0.0, 0.0, -0.5, 0.5).real() == 1.0);
    CHECK(std::abs(phase_integral(0.0, 1e-9, -0.5, 0.5) - 1.0) < 1e-15);
    // x factor for a symmetric interval: 2 sin(beta a/2)/beta
    for (double beta : {1e-7, 1e-5, 1e-3, 0.5, 7.0})
        CHECK(phase_integral(0.0, beta, -0.5, 0.5).real() == Approx(2 * std::sin(beta / 2) / beta).epsilon(1e-12));
    // continuity across the sinc switch
    const double t = sinc_threshold;
    for (double f : {0.999999, 1.000001}) {
        const double b = t * f;
        const Complex exact = std::exp(I * (0.3 + b / 2)) * (std::sin(b / 2) / (b / 2));
        CHECK(std::abs(phase_integral(0.3, b, 0.0, 1.0) - exact) < 1e-15);
    }
}

TEST_CASE("structure factor additivity and Riemann convergence") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 3.0), ph(0, 2 * pi);
    for (int n = 0; n < 20; ++n) {
        WaveContext c(Complex(1.0), u(rng), ph(rng)), cp(Complex(1.0), u(rng), ph(rng));
        DepositionBox whole(Interval{-0.5, 0.5}, Interval{-0.5, 0.5}, Interval{0.0, 1.0});
        DepositionBox lower(Interval{-0.5, 0.5}, Interval{-0.5, 0.5}, Interval{0.0, 0.4});
        DepositionBox upper(Interval{-0.5, 0.5}, Interval{-0.5, 0.5}, Interval{0.4, 1.0});
        Complex a = structure_factor(whole, c, cp), b = structure_factor(lower, c, cp) + structure_factor(upper, c, cp);
        CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
        if (n < 3) {
            auto riemann = [&](int m) {
                Complex s = 0.0;
                const double h = 1.0 / m;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        for (int l = 0; l < m; ++l) {
                            const double x = -0.5 + (i + 0.5) * h, y = -0.5 + (j + 0.5) * h, z = (l + 0.5) * h;
                            s += std::exp(I * ((c.kx() - cp.kx()) * x + (c.ky() - cp.ky()) * y + (c.k_z + cp.k_z) * z));
                        }
                return s * h * h * h;
            };
            const double e1 = std::abs(riemann(10) - a), e2 = std::abs(riemann(20) - a);
            CHECK(std::log2(e1 / e2) == Approx(2.0).epsilon(0.1));
        }
    }
}
