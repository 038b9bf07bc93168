#include "lithoqed/presets.hpp"

namespace lithoqed {

namespace {

// Grating figures use a non-retarded atom (w_A times every length << 1), so U/U0 and F/F0
// do not depend on the length unit.
const char* grating_block = R"([substrate]
material = mirror

[geometry]
type = grating
N = 5
w = 1
h = 1
L = 5
material = constant
epsilon = 1.8
)";

std::string halfspace_line(const char* pol) {
    return std::string("# decay rate over a bare perfect mirror, w_A z from 0.05 to 10\n"
                       "[atom]\nomega_A = 1\ndipole = 1\npolarization = ") +
           pol +
           "\n\n[substrate]\nmaterial = mirror\n\n[geometry]\ntype = none\n\n"
           "[quadrature]\nrel_tol = 1e-8\nabs_tol = 1e-14\n\n"
           "[scan]\nquantity = decay-rate\nnormalization = free-space\norigin = 0 0 1\naxis1 = z 0.05 10 200\n";
}

std::string cube_line(const char* pol) {
    return std::string("# decay rate on the axis above a cube (a = 1, eps 1.8) on a perfect mirror\n"
                       "[atom]\nomega_A = 1\ndipole = 1\npolarization = ") +
           pol +
           "\n\n[substrate]\nmaterial = mirror\n\n[geometry]\ntype = cube\na = 1\nmaterial = constant\n"
           "epsilon = 1.8\n\n[quadrature]\nrel_tol = 1e-4\n\n"
           "[scan]\nquantity = decay-rate\nnormalization = free-space\norigin = 0 0 1\naxis1 = z 1.02 4 60\n";
}

std::vector<Preset> build() {
    std::vector<Preset> p;
    p.push_back({"fig2-par", "half-space decay rate, parallel dipole, Gamma/Gamma0 against w_A z",
                 halfspace_line("x")});
    p.push_back({"fig2-perp", "half-space decay rate, perpendicular dipole, Gamma/Gamma0 against w_A z",
                 halfspace_line("z")});
    p.push_back({"fig4-par", "decay rate above the cube, x-polarised, Gamma/Gamma0 against height", cube_line("x")});
    p.push_back({"fig4-perp", "decay rate above the cube, z-polarised, Gamma/Gamma0 against height", cube_line("z")});
    p.push_back({"fig5", "x-polarised decay rate map 0.01a above the cube, in units of the bare half-space rate",
                 "# x-polarised atom in the plane 0.01a above a cube (a = 1, eps 1.8) on a perfect mirror\n"
                 "[atom]\nomega_A = 1\ndipole = 1\npolarization = x\n\n"
                 "[substrate]\nmaterial = mirror\n\n"
                 "[geometry]\ntype = cube\na = 1\nmaterial = constant\nepsilon = 1.8\n\n"
                 "[quadrature]\nrel_tol = 1e-3\n\n"
                 "[scan]\nquantity = decay-rate\nnormalization = bare-halfspace\norigin = 0 0 1.01\n"
                 "axis1 = x -1 1 21\naxis2 = y -1 1 21\n"});
    p.push_back({"fig6", "CP potential map 0.25 above the N=5 grating, U/U0",
                 std::string("# non-retarded CP potential over the grating (N=5, w=h=1, L=5, eps 1.8)\n"
                             "[atom]\nomega_A = 0.01\ndipole = 1\npolarization = isotropic\n\n") +
                     grating_block +
                     "\n[quadrature]\nrel_tol = 1e-2\n\n"
                     "[scan]\nquantity = cp-potential\nnormalization = U0\norigin = 0 0 1.25\n"
                     "axis1 = x -7 8 31\naxis2 = y -4 4 17\n"});
    p.push_back({"fig7-potential", "CP potential along x at y = 0, 0.25 above the grating, U/U0",
                 std::string("# non-retarded CP potential along the grating axis\n"
                             "[atom]\nomega_A = 0.01\ndipole = 1\npolarization = isotropic\n\n") +
                     grating_block +
                     "\n[quadrature]\nrel_tol = 1e-3\n\n"
                     "[scan]\nquantity = cp-potential\nnormalization = U0\norigin = 0 0 1.25\n"
                     "axis1 = x -7 9 65\n"});
    p.push_back({"fig7-force", "lateral CP force along x at y = 0, 0.25 above the grating, F/F0",
                 std::string("# lateral (x-directed) CP force along the grating axis\n"
                             "[atom]\nomega_A = 0.01\ndipole = 1\npolarization = isotropic\n\n") +
                     grating_block +
                     "\n[quadrature]\nrel_tol = 1e-3\n\n"
                     "[scan]\nquantity = cp-force\nnormalization = F0\ndirection = x\norigin = 0 0 1.25\n"
                     "axis1 = x -7 9 33\n"});
    return p;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> p = build();
    return p;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace lithoqed
