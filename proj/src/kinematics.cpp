#include "lithoqed/kinematics.hpp"

#include <cmath>

namespace lithoqed {

Frequency::Frequency(double v, Axis a) : value(v), axis(a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("frequency must be positive and finite");
}

MaterialModel MaterialModel::constant(double eps) {
    if (!std::isfinite(eps)) throw std::domain_error("constant permittivity must be finite");
    MaterialModel m;
    m.kind = MaterialKind::constant;
    m.epsilon = eps;
    return m;
}

MaterialModel MaterialModel::perfect_mirror() {
    MaterialModel m;
    m.kind = MaterialKind::perfect_mirror;
    return m;
}

MaterialModel MaterialModel::drude_lorentz(std::vector<Oscillator> osc) {
    for (const auto& o : osc) {
        if (!(o.strength >= 0.0) || !(o.frequency >= 0.0) || !(o.damping >= 0.0))
            throw std::domain_error("drude-lorentz parameters must be non-negative");
    }
    MaterialModel m;
    m.kind = MaterialKind::drude_lorentz;
    m.oscillators = std::move(osc);
    return m;
}

Complex permittivity(const MaterialModel& m, Complex omega) {
    switch (m.kind) {
        case MaterialKind::vacuum: return 1.0;
        case MaterialKind::constant: return m.epsilon;
        case MaterialKind::perfect_mirror:
            throw std::domain_error("perfect mirror has no finite permittivity");
        case MaterialKind::drude_lorentz: {
            Complex eps = 1.0;
            for (const auto& o : m.oscillators) {
                Complex den = o.frequency * o.frequency - omega * omega - I * o.damping * omega;
                if (std::abs(den) == 0.0)
                    throw std::domain_error("frequency sits on a pole of the drude-lorentz model");
                eps += o.strength / den;
            }
            return eps;
        }
    }
    return 1.0;
}

Complex permittivity(const MaterialModel& m, const Frequency& f) {
    if (f.axis == Axis::imaginary && m.kind == MaterialKind::drude_lorentz) {
        // real on the imaginary axis; avoid stray imaginary parts
        double xi = f.value, eps = 1.0;
        for (const auto& o : m.oscillators) eps += o.strength / (o.frequency * o.frequency + xi * xi + o.damping * xi);
        return eps;
    }
    return permittivity(m, f.omega());
}

namespace {

Complex branch_sqrt(Complex a) {
    if (a.imag() == 0.0) {
        double r = a.real();
        return r >= 0.0 ? Complex(std::sqrt(r), 0.0) : Complex(0.0, std::sqrt(-r));
    }
    Complex s = std::sqrt(a);
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
    return s;
}

}  // namespace

Complex kz(Complex omega, double k_par) {
    if (omega.imag() == 0.0) {
        double w = omega.real();
        // (w-k)(w+k) keeps precision near the branch point
        return branch_sqrt(Complex((w - k_par) * (w + k_par), 0.0));
    }
    if (omega.real() == 0.0) return {0.0, std::hypot(omega.imag(), k_par)};
    return branch_sqrt(omega * omega - k_par * k_par);
}

Complex kz(const Frequency& f, double k_par) { return kz(f.omega(), k_par); }

Complex kz_medium(Complex eps, Complex omega, double k_par) {
    if (omega.real() == 0.0 && eps.imag() == 0.0) {
        double xi = omega.imag();
        double a = eps.real() * xi * xi + k_par * k_par;
        return {0.0, std::sqrt(a)};
    }
    return branch_sqrt(eps * omega * omega - k_par * k_par);
}

WaveContext::WaveContext(Complex w, double k, double ph)
    : k_par(k), phi(ph), chi(std::cos(ph)), eta(std::sin(ph)), omega(w), k_z(kz(w, k)) {
    if (k < 0.0) throw std::domain_error("k_par must be non-negative");
}

WaveContext WaveContext::swapped_xy() const {
    WaveContext c = *this;
    std::swap(c.chi, c.eta);
    c.phi = std::atan2(c.eta, c.chi);
    return c;
}

Complex fresnel(Polarization sigma, const MaterialModel& m, Complex omega, double k_par) {
    if (m.kind == MaterialKind::perfect_mirror) return sigma == Polarization::TE ? -1.0 : 1.0;
    if (m.kind == MaterialKind::vacuum) return 0.0;
    Complex eps = permittivity(m, omega);
    Complex k1 = kz(omega, k_par);
    Complex k2 = kz_medium(eps, omega, k_par);
    if (sigma == Polarization::TE) return (k1 - k2) / (k1 + k2);
    return (eps * k1 - k2) / (eps * k1 + k2);
}

Complex fresnel(Polarization sigma, const MaterialModel& m, const WaveContext& ctx) {
    return fresnel(sigma, m, ctx.omega, ctx.k_par);
}

}  // namespace lithoqed
