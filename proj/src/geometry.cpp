#include "lithoqed/geometry.hpp"

#include <cmath>
#include <sstream>

namespace lithoqed {

DepositionBox::DepositionBox(Interval xi, Interval yi, Interval zi) : x(xi), y(yi), z(zi) {
    for (const Interval* iv : {&x, &y, &z})
        if (!(iv->hi > iv->lo)) throw std::domain_error("box intervals must be nonempty");
    if (z.lo < 0.0) throw std::domain_error("deposition boxes must sit in z >= 0");
}

bool DepositionBox::contains(const Vec3& p) const {
    return p.x() >= x.lo && p.x() <= x.hi && p.y() >= y.lo && p.y() <= y.hi && p.z() >= z.lo && p.z() <= z.hi;
}

Complex DepositionGeometry::delta_eps(Complex omega) const {
    if (material.kind == MaterialKind::perfect_mirror)
        throw std::domain_error("a deposition cannot be a perfect mirror in the Born expansion");
    return permittivity(material, omega) - 1.0;
}

double DepositionGeometry::volume() const {
    double v = 0.0;
    for (const auto& b : boxes) v += b.volume();
    return v;
}

bool DepositionGeometry::contains(const Vec3& p) const {
    for (const auto& b : boxes)
        if (b.contains(p)) return true;
    return false;
}

double DepositionGeometry::top() const {
    double t = 0.0;
    for (const auto& b : boxes) t = std::max(t, b.z.hi);
    return t;
}

namespace {
bool overlap(const Interval& a, const Interval& b) { return a.lo < b.hi && b.lo < a.hi; }
}  // namespace

void DepositionGeometry::validate() const {
    if (material.kind == MaterialKind::perfect_mirror)
        throw std::domain_error("deposition material cannot be a perfect mirror");
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j)
            if (overlap(boxes[i].x, boxes[j].x) && overlap(boxes[i].y, boxes[j].y) && overlap(boxes[i].z, boxes[j].z)) {
                std::ostringstream os;
                os << "deposition boxes " << i << " and " << j << " overlap";
                throw std::domain_error(os.str());
            }
}

std::vector<std::string> DepositionGeometry::warnings(double omega_A) const {
    std::vector<std::string> out;
    if (boxes.empty()) return out;
    const double d = std::abs(delta_eps(Complex(omega_A, 0.0)));
    if (d >= 1.0) {
        std::ostringstream os;
        os << "|delta eps(omega_A)| = " << d << " >= 1: single-scattering truncation is unreliable";
        out.push_back(os.str());
    }
    return out;
}

DepositionGeometry build_cube(double a, const MaterialModel& material) {
    if (!(a > 0.0)) throw std::domain_error("cube side must be positive");
    DepositionGeometry g;
    g.boxes.emplace_back(Interval{-a / 2, a / 2}, Interval{-a / 2, a / 2}, Interval{0.0, a});
    g.material = material;
    return g;
}

DepositionGeometry build_grating(const GratingSpec& s, const MaterialModel& material) {
    if (s.N < 1) throw std::domain_error("grating needs N >= 1 strips");
    if (!(s.w > 0.0) || !(s.h > 0.0) || !(s.L > 0.0)) throw std::domain_error("grating w, h, L must be positive");
    DepositionGeometry g;
    const double x0 = s.x0();
    for (int n = 0; n < s.N; ++n)
        g.boxes.emplace_back(Interval{x0 + 2 * n * s.w, x0 + (2 * n + 1) * s.w}, Interval{-s.L / 2, s.L / 2},
                             Interval{0.0, s.h});
    g.material = material;
    return g;
}

Complex phase_integral(Complex c0, Complex beta, double a, double b) {
    // centred form: no cancellation between the two end-point exponentials
    const double w = b - a;
    const Complex x = 0.5 * beta * w;
    Complex sinc;
    if (std::abs(beta) * w < sinc_threshold) {
        const Complex x2 = x * x;
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    } else if (std::abs(x.imag()) > 20.0) {
        // strongly growing/decaying: one end point dominates, and sin(x) alone would overflow
        return (std::exp(I * (c0 + beta * b)) - std::exp(I * (c0 + beta * a))) / (I * beta);
    } else {
        sinc = std::sin(x) / x;
    }
    return std::exp(I * (c0 + beta * (0.5 * (a + b)))) * w * sinc;
}

Complex structure_factor(const DepositionBox& box, const WaveContext& c, const WaveContext& cp) {
    const Complex bx = c.kx() - cp.kx();
    const Complex by = c.ky() - cp.ky();
    const Complex bz = c.k_z + cp.k_z;
    return phase_integral(0.0, bx, box.x.lo, box.x.hi) * phase_integral(0.0, by, box.y.lo, box.y.hi) *
           phase_integral(0.0, bz, box.z.lo, box.z.hi);
}

}  // namespace lithoqed
