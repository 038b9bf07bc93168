#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/kinematics.hpp"

#include <random>

using namespace lithoqed;
using doctest::Approx;

TEST_CASE("kz branch examples") {
    Complex a = kz(Frequency::real(2.0), 1.0);
    CHECK(a.real() == Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(a.imag() == 0.0);
    Complex b = kz(Frequency::real(1.0), 2.0);
    CHECK(b.real() == 0.0);
    CHECK(b.imag() == Approx(std::sqrt(3.0)));
    Complex c = kz(Frequency::imaginary(1.0), 1.0);
    CHECK(c.real() == 0.0);
    CHECK(c.imag() == Approx(std::sqrt(2.0)));
}

TEST_CASE("kz reconstructs omega^2 - k^2 with Im >= 0") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double k = u(rng);
        for (Complex w : {Complex(u(rng), 0), Complex(0, u(rng)), Complex(u(rng), 1e-6), Complex(u(rng), u(rng))}) {
            Complex q = kz(w, k);
            CHECK(q.imag() >= 0.0);
            if (q.imag() == 0.0) CHECK(q.real() >= 0.0);
            Complex target = w * w - k * k;
            CHECK(std::abs(q * q - target) <= 1e-13 * (std::abs(w * w) + k * k));
        }
    }
}

TEST_CASE("fresnel examples") {
    auto vac = MaterialModel::vacuum();
    CHECK(fresnel(Polarization::TE, vac, WaveContext(Frequency::real(1.3), 0.4, 0.2)) == Complex(0.0));
    auto pm = MaterialModel::perfect_mirror();
    WaveContext ctx(Frequency::real(1.0), 3.0, 1.0);
    CHECK(fresnel(Polarization::TE, pm, ctx) == Complex(-1.0));
    CHECK(fresnel(Polarization::TM, pm, ctx) == Complex(1.0));
    auto glass = MaterialModel::constant(2.25);
    Complex r = fresnel(Polarization::TE, glass, WaveContext(Frequency::real(1.0), 0.0, 0.0));
    CHECK(r.real() == Approx(-0.2).epsilon(1e-14));
    CHECK(r.imag() == Approx(0.0));
}

TEST_CASE("fresnel bounds on the imaginary axis and mirror limit") {
    auto m = MaterialModel::drude_lorentz({{3.0, 1.0, 0.1}});
    for (double xi : {0.01, 0.3, 1.0, 5.0})
        for (double k : {0.0, 0.5, 2.0, 10.0}) {
            WaveContext ctx(Frequency::imaginary(xi), k, 0.3);
            Complex te = fresnel(Polarization::TE, m, ctx), tm = fresnel(Polarization::TM, m, ctx);
            CHECK(te.imag() == Approx(0.0));
            CHECK(tm.imag() == Approx(0.0));
            CHECK(te.real() > -1.0);
            CHECK(te.real() <= 0.0);
            CHECK(tm.real() >= 0.0);
            CHECK(tm.real() < 1.0);
        }
    double prev_te = 0.0, prev_tm = 0.0;
    for (double eps : {2.0, 10.0, 1e2, 1e4, 1e6}) {
        WaveContext ctx(Frequency::real(1.0), 0.5, 0.0);
        double te = fresnel(Polarization::TE, MaterialModel::constant(eps), ctx).real();
        double tm = fresnel(Polarization::TM, MaterialModel::constant(eps), ctx).real();
        CHECK(te < prev_te);
        CHECK(tm > prev_tm);
        prev_te = te;
        prev_tm = tm;
    }
    CHECK(prev_te == Approx(-1.0).epsilon(1e-2));
    CHECK(prev_tm == Approx(1.0).epsilon(1e-2));
}

TEST_CASE("permittivity") {
    CHECK(permittivity(MaterialModel::vacuum(), Frequency::real(2.0)) == Complex(1.0));
    CHECK(permittivity(MaterialModel::constant(1.8), Frequency::imaginary(2.0)) == Complex(1.8));
    auto m = MaterialModel::drude_lorentz({{2.0, 1.0, 0.05}});
    CHECK(permittivity(m, Frequency::imaginary(1e8)).real() == Approx(1.0).epsilon(1e-12));
    double prev = 1e300;
    for (double xi = 0.0; xi < 20.0; xi += 0.5) {
        Complex e = permittivity(m, Complex(0.0, xi));
        CHECK(e.imag() == Approx(0.0));
        CHECK(e.real() > 1.0);
        CHECK(e.real() < prev);
        prev = e.real();
    }
    auto pole = MaterialModel::drude_lorentz({{1.0, 1.0, 0.0}});
    CHECK_THROWS_AS(permittivity(pole, Frequency::real(1.0)), std::domain_error);
    CHECK_THROWS_AS(Frequency(-1.0), std::domain_error);
}
