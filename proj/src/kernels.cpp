#include "lithoqed/kernels.hpp"

#include <cmath>

namespace lithoqed {

const char* to_string(KernelType t) {
    switch (t) {
        case KernelType::TE: return "TE";
        case KernelType::TM: return "TM";
        case KernelType::TETE: return "TETE";
        case KernelType::TMTM: return "TMTM";
        case KernelType::TETM: return "TETM";
        case KernelType::VAC: return "VAC";
    }
    return "?";
}

namespace {

// i, j in {x, z} only; y entries come from the xy symmetry.
SeparableHalves xz_separable(KernelType tau, int i, int j, Ordering ord, double k2, Complex kz, double p2, Complex pz,
                             Complex w) {
    SeparableHalves h;
    auto U = [&](Complex c, AngularFactor a, AngularFactor b) { h.unprimed[h.n_unprimed++] = {c, a, b}; };
    auto P = [&](Complex c, AngularFactor a, AngularFactor b) { h.primed[h.n_primed++] = {c, a, b}; };
    using enum AngularFactor;
    const Complex w2 = w * w, kz2 = kz * kz, pz2 = pz * pz;
    const bool xx = i == 0 && j == 0, xy = i == 0 && j == 1, xz = i == 0 && j == 2, zx = i == 2 && j == 0,
               zz = i == 2 && j == 2;
    const Complex X = kz * pz * k2 * p2;  // times kx px
    switch (tau) {
        case KernelType::TE:
            if (xx) {
                U(w2 * kz2, xx_, yy_);
                U(w2 * w2, yy_, yy_);
                P(w2 * pz2, yy_, xx_);
                P(w2 * w2, yy_, yy_);
            } else if (xy) {
                U(w2 * k2, xy_, xy_);
                P(w2 * p2, xy_, xy_);
            }
            break;
        case KernelType::TM: {
            // the R-free factor's k_z sign flips below the source, flipping both xz/zx halves
            const double flip = ord == Ordering::lesser ? -1.0 : 1.0;
            if (xx) {
                U(-pz2 * kz2, xx_, xx_);
                U(-pz2 * w2, yy_, xx_);
                P(-kz2 * pz2, xx_, xx_);
                P(-kz2 * w2, xx_, yy_);
            } else if (xy) {
                U(k2 * pz2, xy_, xy_);
                P(p2 * kz2, xy_, xy_);
            } else if (xz) {
                U(flip * X, x_, x_);
                P(-flip * X, x_, x_);
            } else if (zx) {
                U(-flip * X, x_, x_);
                P(flip * X, x_, x_);
            } else if (zz) {
                U(k2 * k2 * p2 * p2, one, one);
                P(k2 * k2 * p2 * p2, one, one);
            }
            break;
        }
        case KernelType::TETE:
            if (xx) U(w2 * w2, yy_, yy_);
            if (xy) U(w2 * w2, xy_, xy_);
            break;
        case KernelType::TMTM:
            if (xx) U(kz2 * pz2, xx_, xx_);
            if (xy) U(kz2 * pz2, xy_, xy_);
            if (xz || zx) U(X, x_, x_);
            if (zz) U(k2 * k2 * p2 * p2, one, one);
            break;
        case KernelType::TETM:
            if (xx) {
                U(-w2 * kz2, xx_, yy_);
                P(-w2 * pz2, yy_, xx_);
            } else if (xy) {
                U(w2 * kz2, xy_, xy_);
                P(w2 * pz2, xy_, xy_);
            }
            break;
        case KernelType::VAC:
            if (xx) {
                U(kz2 * pz2, xx_, xx_);
                U(kz2 * w2, xx_, yy_);
                U(w2 * pz2, yy_, xx_);
                U(w2 * w2, yy_, yy_);
            }
            if (xy) U(k2 * p2, xy_, xy_);
            if (xz || zx) U(-X, x_, x_);
            if (zz) U(k2 * k2 * p2 * p2, one, one);
            break;
    }
    return h;
}

AngularFactor swap_xy(AngularFactor f) {
    switch (f) {
        case AngularFactor::x_: return AngularFactor::y_;
        case AngularFactor::y_: return AngularFactor::x_;
        case AngularFactor::xx_: return AngularFactor::yy_;
        case AngularFactor::yy_: return AngularFactor::xx_;
        default: return f;
    }
}

}  // namespace

SeparableHalves separable_halves(KernelType tau, int i, int j, Ordering ord, double k, Complex kz, double kp,
                                 Complex pz, Complex w) {
    if (i < 0 || i > 2 || j < 0 || j > 2) throw std::out_of_range("kernel index");
    const double k2 = k * k, p2 = kp * kp;
    if ((i == 1 && j == 0) || (i == 0 && j == 1)) return xz_separable(tau, 0, 1, ord, k2, kz, p2, pz, w);
    if (i == 1 || j == 1) {
        // yy, yz, zy from xx, xz, zx with k_x <-> k_y
        SeparableHalves h = xz_separable(tau, i == 1 ? 0 : i, j == 1 ? 0 : j, ord, k2, kz, p2, pz, w);
        for (int t = 0; t < h.n_unprimed; ++t) {
            h.unprimed[t].a = swap_xy(h.unprimed[t].a);
            h.unprimed[t].b = swap_xy(h.unprimed[t].b);
        }
        for (int t = 0; t < h.n_primed; ++t) {
            h.primed[t].a = swap_xy(h.primed[t].a);
            h.primed[t].b = swap_xy(h.primed[t].b);
        }
        return h;
    }
    return xz_separable(tau, i, j, ord, k2, kz, p2, pz, w);
}

double angular_factor(AngularFactor f, double kx, double ky) {
    switch (f) {
        case AngularFactor::one: return 1.0;
        case AngularFactor::x_: return kx;
        case AngularFactor::y_: return ky;
        case AngularFactor::xx_: return kx * kx;
        case AngularFactor::yy_: return ky * ky;
        case AngularFactor::xy_: return kx * ky;
    }
    return 0.0;
}

KernelHalves kernel_halves(KernelType tau, int i, int j, Ordering ord, const KVec& k, const KVec& kp, Complex w) {
    const SeparableHalves h =
        separable_halves(tau, i, j, ord, std::sqrt(k.k2()), k.kz, std::sqrt(kp.k2()), kp.kz, w);
    KernelHalves out{0.0, 0.0};
    for (int t = 0; t < h.n_unprimed; ++t)
        out.unprimed += h.unprimed[t].coef * angular_factor(h.unprimed[t].a, k.kx, k.ky) *
                        angular_factor(h.unprimed[t].b, kp.kx, kp.ky);
    for (int t = 0; t < h.n_primed; ++t)
        out.primed += h.primed[t].coef * angular_factor(h.primed[t].a, k.kx, k.ky) *
                      angular_factor(h.primed[t].b, kp.kx, kp.ky);
    return out;
}

Complex kernel_entry(KernelType tau, int i, int j, Ordering ord, const WaveContext& c, const WaveContext& cp,
                     double s_z, double r_z, double r_zp) {
    KernelHalves h = kernel_halves(tau, i, j, ord, KVec::from(c), KVec::from(cp), c.omega);
    const Complex kz = c.k_z, pz = cp.k_z;
    const bool g = ord == Ordering::greater;
    switch (tau) {
        case KernelType::TE:
        case KernelType::TM:
            if (g) return h.unprimed * std::exp(-2.0 * I * kz * s_z) + h.primed * std::exp(-2.0 * I * pz * s_z);
            return h.unprimed * std::exp(-2.0 * I * kz * r_z) + h.primed * std::exp(-2.0 * I * pz * r_zp);
        case KernelType::VAC:
            if (g) return h.unprimed * std::exp(-2.0 * I * (kz + pz) * s_z);
            return h.unprimed * std::exp(-2.0 * I * (kz * r_z + pz * r_zp));
        default: return h.unprimed + h.primed;
    }
}

Complex born_prefactor(const WaveContext& c, const WaveContext& cp, const Vec3& r, const Vec3& rp, const Vec3& s,
                       Complex de) {
    const Complex w = c.omega;
    const double k2 = c.k_par * c.k_par, p2 = cp.k_par * cp.k_par;
    const Complex phase = c.kx() * (r.x() - s.x()) + c.ky() * (r.y() - s.y()) + cp.kx() * (s.x() - rp.x()) +
                          cp.ky() * (s.y() - rp.y()) + c.k_z * (r.z() + s.z()) + cp.k_z * (rp.z() + s.z());
    return -de / (64 * std::pow(pi, 4) * w * w * w * w * k2 * p2 * c.k_z * cp.k_z) * std::exp(I * phase);
}

Matrix3c born_integrand(const HalfSpaceEnvironment& env, const Vec3& s, const Vec3& r, const Vec3& rp,
                        const WaveContext& c, const WaveContext& cp, Complex de, BornVariant variant) {
    const Ordering o1 = r.z() > s.z() ? Ordering::greater : Ordering::lesser;
    const Ordering o2 = rp.z() > s.z() ? Ordering::greater : Ordering::lesser;
    if (o1 != o2) throw std::domain_error("field and source points lie on opposite sides of the source slab");
    const Complex te = fresnel(Polarization::TE, env.substrate, c), tm = fresnel(Polarization::TM, env.substrate, c);
    const Complex tep = fresnel(Polarization::TE, env.substrate, cp), tmp = fresnel(Polarization::TM, env.substrate, cp);
    const KVec a = KVec::from(c), b = KVec::from(cp);
    const Complex kz = c.k_z, pz = cp.k_z;
    const bool g = o1 == Ordering::greater;
    // exponentials of the two linear halves relative to P
    const Complex eu = g ? std::exp(-2.0 * I * kz * s.z()) : std::exp(-2.0 * I * kz * r.z());
    const Complex ep = g ? std::exp(-2.0 * I * pz * s.z()) : std::exp(-2.0 * I * pz * rp.z());
    Matrix3c m = Matrix3c::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Complex v = 0.0;
            auto h = kernel_halves(KernelType::TE, i, j, o1, a, b, c.omega);
            v += h.unprimed * eu * tep + h.primed * ep * te;
            h = kernel_halves(KernelType::TM, i, j, o1, a, b, c.omega);
            v += h.unprimed * eu * tmp + h.primed * ep * tm;
            v += kernel_halves(KernelType::TETE, i, j, o1, a, b, c.omega).unprimed * te * tep;
            v += kernel_halves(KernelType::TMTM, i, j, o1, a, b, c.omega).unprimed * tm * tmp;
            h = kernel_halves(KernelType::TETM, i, j, o1, a, b, c.omega);
            v += h.unprimed * tm * tep + h.primed * te * tmp;
            if (variant == BornVariant::whole)
                v += kernel_halves(KernelType::VAC, i, j, o1, a, b, c.omega).unprimed * eu * ep;
            m(i, j) = v;
        }
    const Complex w = c.omega;
    return w * w * born_prefactor(c, cp, r, rp, s, de) * m;
}

}  // namespace lithoqed
