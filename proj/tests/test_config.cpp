#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/config.hpp"
#include "lithoqed/presets.hpp"
#include "lithoqed/scan.hpp"

#include <sstream>

using namespace lithoqed;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config_ini(in, "t.ini");
}

// line number of a ConfigError thrown while parsing and checking text
int error_line(const std::string& text, std::string* msg = nullptr) {
    try {
        check_scan_points(parse(text));
    } catch (const ConfigError& e) {
        if (msg) *msg = e.what();
        return e.line();
    }
    return -1;
}

const char* minimal = "[atom]\nomega_A = 1\npolarization = z\n[scan]\nquantity = decay-rate\naxis1 = z 1 2 3\n";

}  // namespace

TEST_CASE("defaults and grid order") {
    const RunConfig c = parse(minimal);
    CHECK(c.scan.quantity == Quantity::decay_rate);
    CHECK(c.scan.normalization == Normalization::free_space);
    CHECK(c.env.substrate.kind == MaterialKind::perfect_mirror);
    CHECK(c.geometry.boxes.empty());
    const auto p = c.scan.points();
    REQUIRE(p.size() == 3);
    CHECK(p[0].z() == 1.0);
    CHECK(p[1].z() == 1.5);
    CHECK(p[2].z() == 2.0);

    const RunConfig g = parse(
        "[atom]\nomega_A = 1\n[scan]\nquantity = decay-rate\norigin = 0 0 5\naxis1 = x 0 1 2\naxis2 = y 0 2 3\n");
    const auto q = g.scan.points();
    REQUIRE(q.size() == 6);
    CHECK(q[0] == Vec3(0, 0, 5));
    CHECK(q[1] == Vec3(0, 1, 5));
    CHECK(q[3] == Vec3(1, 0, 5));
}

TEST_CASE("default normalizations per quantity") {
    CHECK(parse("[atom]\nomega_A = 1\n[geometry]\ntype = cube\na = 1\nepsilon = 1.8\n"
                "[scan]\nquantity = decay-rate\norigin = 0 0 2\n")
              .scan.normalization == Normalization::bare_halfspace);
    CHECK(parse("[atom]\nomega_A = 1\n[scan]\nquantity = cp-potential\n").scan.normalization == Normalization::U0);
    CHECK(parse("[atom]\nomega_A = 1\n[scan]\nquantity = cp-force\n").scan.normalization == Normalization::F0);
}

TEST_CASE("errors carry the offending line") {
    std::string msg;
    CHECK(error_line("[atom]\nomega_A = abc\n", &msg) == 2);
    CHECK(msg.find("t.ini:2:") == 0);
    CHECK(error_line("[atom]\nomega = 1\n", &msg) == 2);
    CHECK(msg.find("omega") != std::string::npos);
    CHECK(error_line("[atom]\nomega_A = 1\n[bogus]\nx = 1\n") > 0);
    CHECK(error_line("[atom\nomega_A = 1\n") == 1);
    CHECK(error_line("[atom]\nomega_A = 1\nomega_A = 2\n") == 3);
    CHECK(error_line("[atom]\nomega_A = 1\n[scan]\nquantity = decay-rate\naxis1 = z 1 2 0\n") == 5);
    CHECK(error_line("[atom]\nomega_A = 1\n[scan]\nquantity = decay-rate\naxis1 = w 1 2 3\n") == 5);
    CHECK(error_line("[atom]\nomega_A = 1\n[scan]\nquantity = cp-force\nnormalization = U0\n") == 5);
    CHECK(error_line("[atom]\nomega_A = 1\n[scan]\nquantity = decay-rate\nnormalization = F0\n") == 5);
    CHECK(error_line("[atom]\nomega_A = -1\n") == 2);
    CHECK(error_line("[atom]\nomega_A = 1\n") >= 0);          // missing quantity
}

TEST_CASE("grid points inside the deposition are named") {
    std::string msg;
    const int line = error_line("[atom]\nomega_A = 1\n[geometry]\ntype = cube\na = 1\nepsilon = 1.8\n"
                                "[scan]\nquantity = decay-rate\norigin = 0 0 0.5\n",
                                &msg);
    CHECK(line == 9);
    CHECK(msg.find("inside the deposition") != std::string::npos);
    CHECK(msg.find("0.5") != std::string::npos);
    CHECK(error_line("[atom]\nomega_A = 1\n[scan]\nquantity = decay-rate\naxis1 = z -1 1 3\n", &msg) > 0);
    CHECK(msg.find("not above the substrate") != std::string::npos);
}

TEST_CASE("geometry blocks") {
    const RunConfig g = parse("[atom]\nomega_A = 1\n[geometry]\ntype = grating\nN = 5\nw = 1\nh = 1\nL = 5\n"
                              "epsilon = 1.8\n[scan]\nquantity = cp-potential\n");
    REQUIRE(g.geometry.boxes.size() == 5);
    CHECK(g.geometry.boxes[0].x.lo == -4.25);
    CHECK(g.geometry.boxes[4].x.hi == 4.75);
    CHECK(g.geometry.volume() == doctest::Approx(25.0));

    const RunConfig b = parse("[atom]\nomega_A = 1\n[geometry]\ntype = boxes\n"
                              "boxes = 0 1 0 1 0 1; 2 3 0 1 0 0.5\nepsilon = 1.5\n[scan]\nquantity = cp-potential\n");
    CHECK(b.geometry.boxes.size() == 2);
    CHECK(b.geometry.volume() == doctest::Approx(1.5));

    const RunConfig d = parse("[atom]\nomega_A = 1\n[substrate]\nmaterial = drude-lorentz\n"
                              "oscillators = 1 2 0.1; 0.5 3 0\n[scan]\nquantity = cp-potential\n");
    CHECK(d.env.substrate.kind == MaterialKind::drude_lorentz);
    CHECK(d.env.substrate.oscillators.size() == 2);
    CHECK(permittivity(d.env.substrate, Complex(0.0, 1.0)).real() > 1.0);
}

TEST_CASE("every preset parses and is well posed") {
    for (const auto& p : presets()) {
        CAPTURE(p.name);
        std::istringstream in(p.text);
        RunConfig c;
        CHECK_NOTHROW(c = parse_config_ini(in, p.name));
        CHECK_NOTHROW(check_scan_points(c));
        CHECK(c.scan.size() > 0);
    }
    CHECK(find_preset("nope") == nullptr);
}

TEST_CASE("INI and JSON echo round trip") {
    std::istringstream in(find_preset("fig4-perp")->text);
    const RunConfig a = parse_config_ini(in, "a.ini");
    const RunConfig b = parse_config_json(
        [&] {
            std::ostringstream s;
            write_json(s, a, ScanResult{}, false);
            return s.str();
        }(),
        "a.json");
    std::istringstream in2(to_ini(b.entries));
    const RunConfig c = parse_config_ini(in2, "c.ini");
    for (const RunConfig* x : {&b, &c}) {
        CHECK(x->scan.points() == a.scan.points());
        CHECK(x->geometry.boxes.size() == a.geometry.boxes.size());
        CHECK(x->quadrature.rel_tol == a.quadrature.rel_tol);
        CHECK(x->atom.omega_A == a.atom.omega_A);
        CHECK(x->atom.direction == a.atom.direction);
        CHECK(x->scan.normalization == a.scan.normalization);
    }
    // a point from each config evaluates bit-identically
    const Vec3 r(0, 0, 2);
    CHECK(evaluate_point(a, r).value == evaluate_point(b, r).value);
}
