#include "lithoqed/oracle.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace lithoqed {

KernelSample random_kernel_sample(Ordering ord, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> kdist(0.2, 2.5), phi(0.0, 2 * pi), wd(0.5, 2.0), xy(-1.0, 1.0),
        zd(0.1, 1.0);
    const Complex w(wd(rng), 1e-6);
    KernelSample s{WaveContext(w, kdist(rng), phi(rng)), WaveContext(w, kdist(rng), phi(rng)), {}, {}, {}};
    const double sz = zd(rng) + 0.2;
    s.s = Vec3(xy(rng), xy(rng), sz);
    if (ord == Ordering::greater) {
        s.r = Vec3(xy(rng), xy(rng), sz + zd(rng));
        s.r_prime = Vec3(xy(rng), xy(rng), sz + zd(rng));
    } else {
        std::uniform_real_distribution<double> below(0.05, sz - 0.05);
        s.r = Vec3(xy(rng), xy(rng), below(rng));
        s.r_prime = Vec3(xy(rng), xy(rng), below(rng));
    }
    return s;
}

namespace {

using Coords = std::array<long double, 6>;  // field point (0..2), source point (3..5)
using CL = std::complex<long double>;        // extended precision keeps the 4th-order stencils clear of roundoff
using Scalar = std::function<CL(const Coords&)>;

// Nested central differences over the listed coordinates.
CL central(const Scalar& g, Coords x, const std::vector<int>& idx, std::size_t pos, long double h) {
    if (pos == idx.size()) return g(x);
    const int c = idx[pos];
    Coords p = x, m = x;
    p[c] += h;
    m[c] -= h;
    return (central(g, p, idx, pos + 1, h) - central(g, m, idx, pos + 1, h)) / (2.0L * h);
}

// Richardson extrapolation of the O(h^2) central scheme.
Complex derivative(const Scalar& g, const Coords& x, const std::vector<int>& idx, double h) {
    if (idx.empty()) return Complex(g(x));
    constexpr int levels = 5;
    CL T[levels][levels];
    for (int l = 0; l < levels; ++l) {
        T[l][0] = central(g, x, idx, 0, h / std::pow(2.0L, l));
        for (int m = 1; m <= l; ++m) {
            const long double f = std::pow(4.0L, m);
            T[l][m] = (f * T[l][m - 1] - T[l - 1][m - 1]) / (f - 1.0L);
        }
    }
    return Complex(T[levels - 1][levels - 1]);
}

// Vector differential operator acting on one slot: list of (coefficient, derivative indices).
using OpTerm = std::pair<double, std::vector<int>>;
using VecOp = std::array<std::vector<OpTerm>, 3>;

VecOp te_op(int o) {  // curl z-hat: (d_y, -d_x, 0)
    return {std::vector<OpTerm>{{1.0, {o + 1}}}, std::vector<OpTerm>{{-1.0, {o + 0}}}, std::vector<OpTerm>{}};
}
VecOp tm_op(int o) {  // curl curl z-hat: (d_x d_z, d_y d_z, -d_x^2 - d_y^2)
    return {std::vector<OpTerm>{{1.0, {o + 0, o + 2}}}, std::vector<OpTerm>{{1.0, {o + 1, o + 2}}},
            std::vector<OpTerm>{{-1.0, {o + 0, o + 0}}, {-1.0, {o + 1, o + 1}}}};
}

// D_sigma applied to g(r, s); returns the 3x3 matrix (TM includes 1/w^2).
Matrix3c apply_d(Polarization sig, const Scalar& g, const Coords& x, double h, Complex w) {
    const VecOp L = sig == Polarization::TE ? te_op(0) : tm_op(0);
    const VecOp Rr = sig == Polarization::TE ? te_op(3) : tm_op(3);
    Matrix3c m = Matrix3c::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Complex v = 0.0;
            for (const auto& [ci, ii] : L[i])
                for (const auto& [cj, jj] : Rr[j]) {
                    std::vector<int> idx = ii;
                    idx.insert(idx.end(), jj.begin(), jj.end());
                    v += ci * cj * derivative(g, x, idx, h);
                }
            m(i, j) = v;
        }
    if (sig == Polarization::TM) m /= (w * w);
    return m;
}

// Plane-wave factor of W(a, b): exp(i k.(a - b)) times the z-part of F (R-free or reflected).
// The R-free |a_z - b_z| is continued analytically from the side of the base point, so the
// stencil may cross the kink without picking it up.
Scalar plane_wave(const WaveContext& c, bool reflected, long double side) {
    const long double kx = c.kx(), ky = c.ky();
    const CL kz(c.k_z.real(), c.k_z.imag());
    return [=](const Coords& x) {
        const CL inplane = kx * (x[0] - x[3]) + ky * (x[1] - x[4]);
        const CL zpart = reflected ? kz * (x[2] + x[5]) : kz * side * (x[2] - x[5]);
        return std::exp(CL(0.0L, 1.0L) * (inplane + zpart));
    };
}

struct FactorParts {
    Matrix3c free_sum;  // (TE + TM) applied to the R-free term
    Matrix3c te_r, tm_r;
};

FactorParts factor(const WaveContext& c, const Vec3& a, const Vec3& b, double h) {
    const Coords x{a.x(), a.y(), a.z(), b.x(), b.y(), b.z()};
    const long double side = a.z() >= b.z() ? 1.0L : -1.0L;
    const Scalar gf = plane_wave(c, false, side), gr = plane_wave(c, true, side);
    FactorParts f;
    f.free_sum = apply_d(Polarization::TE, gf, x, h, c.omega) + apply_d(Polarization::TM, gf, x, h, c.omega);
    f.te_r = apply_d(Polarization::TE, gr, x, h, c.omega);
    f.tm_r = apply_d(Polarization::TM, gr, x, h, c.omega);
    return f;
}

}  // namespace

KernelCheckResult kernel_operator_check(KernelType tau, Ordering ord, const KernelSample& smp, const OracleConfig& cfg) {
    const WaveContext& c = smp.ctx;
    const WaveContext& cp = smp.ctx_prime;
    const double kmax = std::max({c.k_par, cp.k_par, std::abs(c.k_z), std::abs(cp.k_z), std::abs(c.omega), 1.0});
    const double hs = cfg.fd_step / kmax;
    FactorParts f1 = factor(c, smp.r, smp.s, hs);
    FactorParts f2 = factor(cp, smp.s, smp.r_prime, hs);
    const Complex w = c.omega;
    const Complex w4 = w * w * w * w;
    const Vec3 &r = smp.r, &s = smp.s, &rp = smp.r_prime;
    const Complex phase = std::exp(I * (c.kx() * (r.x() - s.x()) + c.ky() * (r.y() - s.y()) + cp.kx() * (s.x() - rp.x()) +
                                        cp.ky() * (s.y() - rp.y()) + c.k_z * (r.z() + s.z()) +
                                        cp.k_z * (rp.z() + s.z())));
    KernelCheckResult out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Complex o = 0.0;
            switch (tau) {
                case KernelType::TE: o = f1.free_sum(i, j) * f2.te_r(i, j) + f1.te_r(i, j) * f2.free_sum(i, j); break;
                case KernelType::TM: o = f1.free_sum(i, j) * f2.tm_r(i, j) + f1.tm_r(i, j) * f2.free_sum(i, j); break;
                case KernelType::TETE: o = f1.te_r(i, j) * f2.te_r(i, j); break;
                case KernelType::TMTM: o = f1.tm_r(i, j) * f2.tm_r(i, j); break;
                case KernelType::TETM: o = f1.tm_r(i, j) * f2.te_r(i, j) + f1.te_r(i, j) * f2.tm_r(i, j); break;
                case KernelType::VAC: o = f1.free_sum(i, j) * f2.free_sum(i, j); break;
            }
            o *= w4 / phase;
            const Complex k = kernel_entry(tau, i, j, ord, c, cp, s.z(), r.z(), rp.z());
            out.oracle(i, j) = o;
            out.kernel(i, j) = k;
        }
    const double scale = std::max(out.oracle.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double ao = std::abs(out.oracle(i, j));
            const double dev = ao > 1e-9 * scale ? std::abs(out.kernel(i, j) - out.oracle(i, j)) / ao
                                                 : std::abs(out.kernel(i, j) - out.oracle(i, j)) / scale;
            if (dev > out.max_deviation || out.worst_i < 0) {
                out.max_deviation = dev;
                out.worst_i = i;
                out.worst_j = j;
            }
        }
    return out;
}

}  // namespace lithoqed
