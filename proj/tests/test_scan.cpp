#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lithoqed/presets.hpp"
#include "lithoqed/scan.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace lithoqed;

namespace {

RunConfig preset(const std::string& name) {
    std::istringstream in(find_preset(name)->text);
    return parse_config_ini(in, name);
}

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config_ini(in, "t.ini");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE_MESSAGE(f, "missing " << path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("CSV layout: header, 17 significant digits, grid order") {
    RunConfig c = parse("[atom]\nomega_A = 1\npolarization = z\n[scan]\nquantity = decay-rate\naxis1 = z 0.3 0.7 3\n");
    const ScanResult r = run_scan(c);
    std::ostringstream s;
    write_csv(s, r.records);
    const auto rows = csv_rows(s.str());
    REQUIRE(rows.size() == 4);
    CHECK(s.str().substr(0, s.str().find('\n')) == csv_header);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 7);
        CHECK(std::stod(rows[i][2]) == c.scan.points()[i - 1].z());
        CHECK(std::stod(rows[i][3]) == r.records[i - 1].value);  // exact round trip
        CHECK(rows[i][6] == "1");
    }
    CHECK(rows[2][2] == "0.5");
    CHECK(rows[1][2] == "0.29999999999999999");
}

TEST_CASE("normalizations") {
    const RunConfig c = parse("[atom]\nomega_A = 2\ndipole = 0.5\npolarization = z\n"
                              "[scan]\nquantity = decay-rate\norigin = 0 0 0.2\n");
    const ResultRecord d = evaluate_point(c, Vec3(0, 0, 0.2));
    CHECK(d.normalized == doctest::Approx(d.value / (8 * 0.25 / (3 * M_PI))).epsilon(1e-14));

    const RunConfig u = parse("[atom]\nomega_A = 1\n[scan]\nquantity = cp-potential\n");
    const ResultRecord p = evaluate_point(u, Vec3(0, 0, 0.01));
    CHECK(p.value < 0.0);
    CHECK(p.normalized == doctest::Approx(1.0).epsilon(0.02));

    const RunConfig raw = parse("[atom]\nomega_A = 1\n[scan]\nquantity = cp-potential\nnormalization = raw\n");
    CHECK(evaluate_point(raw, Vec3(0, 0, 0.01)).normalized == p.value);
}

TEST_CASE("results do not depend on the thread count") {
    const RunConfig c = parse("[atom]\nomega_A = 1\npolarization = x\n[geometry]\ntype = cube\na = 1\nepsilon = 1.8\n"
                              "[quadrature]\nrel_tol = 1e-3\n[scan]\nquantity = decay-rate\norigin = 0 0 1.5\n"
                              "axis1 = x -0.5 0.5 3\n");
    const ScanResult one = run_scan(c, 1), three = run_scan(c, 3);
    REQUIRE(one.records.size() == 3);
    REQUIRE(three.records.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(one.records[i].position == three.records[i].position);
        CHECK(one.records[i].value == three.records[i].value);
        CHECK(one.records[i].error == three.records[i].error);
    }
    // mirror symmetry of the cube
    CHECK(one.records[0].value == doctest::Approx(one.records[2].value).epsilon(1e-6));
    CHECK(three.threads == 3);
}

TEST_CASE("preset texts match the shipped files") {
    for (const auto& p : presets()) {
        CAPTURE(p.name);
        CHECK(read_file(std::string(LITHOQED_SOURCE_DIR) + "/presets/" + p.name + ".ini") == p.text);
    }
}

TEST_CASE("half-space presets reproduce the golden curves") {
    for (const char* name : {"fig2-par", "fig2-perp"}) {
        CAPTURE(name);
        const ScanResult r = run_scan(preset(name), 2);
        const auto gold = csv_rows(read_file(std::string(LITHOQED_SOURCE_DIR) + "/tests/golden/" + name + ".csv"));
        REQUIRE(gold.size() == r.records.size() + 1);
        CHECK(gold[0].size() == 7);
        for (std::size_t i = 0; i < r.records.size(); ++i) {
            const auto& g = gold[i + 1];
            CHECK(std::stod(g[2]) == r.records[i].position.z());
            CHECK(r.records[i].normalized == doctest::Approx(std::stod(g[4])).epsilon(1e-10));
            CHECK(r.records[i].converged);
        }
        CHECK(r.all_converged());
    }
}

TEST_CASE("JSON sidecar") {
    const RunConfig c = preset("fig2-perp");
    ScanResult r;
    r.records.push_back(evaluate_point(c, Vec3(0, 0, 1)));
    r.wall_seconds = 0.5;
    std::ostringstream s;
    write_json(s, c, r, true);
    const std::string j = s.str();
    for (const char* key : {"\"version\"", "\"config\"", "\"quantity\"", "\"normalization\"", "\"timing\"",
                            "\"records\"", "\"wall_seconds\"", "\"threads\""})
        CHECK_MESSAGE(j.find(key) != std::string::npos, key);
    const RunConfig back = parse_config_json(j, "side.json");
    CHECK(evaluate_point(back, Vec3(0, 0, 1)).value == r.records[0].value);
}
