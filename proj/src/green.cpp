#include "lithoqed/green.hpp"

#include <cmath>

namespace lithoqed {

GreenTensor vacuum_gf(const Vec3& r, const Vec3& rp, Complex w) {
    const Vec3 d = r - rp;
    const double R = d.norm();
    if (R == 0.0) throw std::domain_error("vacuum Green tensor is singular at coincident points");
    const Vec3 n = d / R;
    const Complex x = w * R;
    const Complex a = 1.0 + I / x - 1.0 / (x * x);
    const Complex b = -1.0 - 3.0 * I / x + 3.0 / (x * x);
    const Complex g = std::exp(I * x) / (4 * pi * R);
    GreenTensor out;
    out.entries = (a * Matrix3c::Identity() + b * (n * n.transpose()).cast<Complex>()) * g;
    out.r = r;
    out.r_prime = rp;
    out.omega = w;
    out.part = GreenPart::whole;
    return out;
}

namespace {

// Azimuthal averages of exp(i k.rho) times 1, k_hat, k_hat k_hat (2-D).
struct Azimuthal {
    Complex a0;
    Eigen::Vector2cd a1;
    Eigen::Matrix2d a2;   // <k_hat k_hat>
    Eigen::Matrix2d a2p;  // <(J k_hat)(J k_hat)^T>, J k_hat = (k_y, -k_x)/k

    Azimuthal(double k, const Eigen::Vector2d& rho) {
        const double r = rho.norm();
        Eigen::Vector2d u = r > 0 ? Eigen::Vector2d(rho / r) : Eigen::Vector2d(1.0, 0.0);
        Eigen::Vector2d v(-u.y(), u.x());
        const double x = k * r;
        const double j0 = x == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, x);
        const double j1 = x == 0.0 ? 0.0 : std::cyl_bessel_j(1.0, x);
        const double j2 = x == 0.0 ? 0.0 : std::cyl_bessel_j(2.0, x);
        const Eigen::Matrix2d q = u * u.transpose() - v * v.transpose();
        a0 = 2 * pi * j0;
        a1 = (2 * pi * I * j1) * u.cast<Complex>();
        a2 = pi * j0 * Eigen::Matrix2d::Identity() - pi * j2 * q;
        a2p = pi * j0 * Eigen::Matrix2d::Identity() + pi * j2 * q;
    }
};

struct Blocks {
    Matrix3c te = Matrix3c::Zero();
    Matrix3c tm = Matrix3c::Zero();
};

// Angular-integrated D_sigma tensors. `reflected` selects the R-term vectors,
// otherwise the R-free term with s = sign(z - z').
Blocks polarisation_blocks(double k, Complex k_z, Complex w, const Azimuthal& az, bool reflected, double s) {
    Blocks b;
    const double k2 = k * k;
    b.te.topLeftCorner<2, 2>() = (k2 * az.a2p).cast<Complex>();
    const Complex inv_w2 = 1.0 / (w * w);
    if (reflected) {
        b.tm.topLeftCorner<2, 2>() = (-k_z * k_z * k2) * az.a2.cast<Complex>();
        b.tm.block<2, 1>(0, 2) = (-k_z * k2 * k) * az.a1;
        b.tm.block<1, 2>(2, 0) = ((k_z * k2 * k) * az.a1).transpose();
    } else {
        b.tm.topLeftCorner<2, 2>() = (k_z * k_z * k2) * az.a2.cast<Complex>();
        b.tm.block<2, 1>(0, 2) = (-s * k_z * k2 * k) * az.a1;
        b.tm.block<1, 2>(2, 0) = ((-s * k_z * k2 * k) * az.a1).transpose();
    }
    b.tm(2, 2) = k2 * k2 * az.a0;
    b.tm *= inv_w2;
    return b;
}

}  // namespace

IntegralResultT<Matrix3c> vacuum_gf_im_coincident(Complex w, const QuadratureConfig& cfg) {
    if (w.imag() != 0.0 || !(w.real() > 0.0)) throw std::domain_error("coincidence limit needs a real frequency");
    RadialLine line = make_radial_line(w, w.real(), true);  // propagating band only
    const Eigen::Vector2d rho(0.0, 0.0);
    auto g = [&](int seg, double t) -> Matrix3c {
        RadialNode n = line.node(seg, t);
        Azimuthal az(n.k, rho);
        Blocks b = polarisation_blocks(n.k, n.k_z, w, az, false, 1.0);
        if (n.k == 0.0) return Matrix3c::Zero();
        // k dk / (k^2 k_z) = dk / (k k_z)
        Matrix3c m = (b.te + b.tm) * (I / (8 * pi * pi) / n.k * n.jac_over_kz);
        return m.imag().cast<Complex>();
    };
    return gk_integrate_plain<Matrix3c>(g, line.panels(), {cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions});
}

GreenTensor halfspace_gf(const HalfSpaceEnvironment& env, const Vec3& r, const Vec3& rp, Complex w, GreenPart part,
                         const QuadratureConfig& cfg, FreePart free) {
    if (!(r.z() > 0.0) || !(rp.z() > 0.0)) throw std::domain_error("half-space field points need z > 0");
    GreenTensor out;
    out.r = r;
    out.r_prime = rp;
    out.omega = w;
    out.part = part;
    const double dz = r.z() - rp.z();
    const bool numeric_free = part == GreenPart::whole && free == FreePart::quadrature;
    if (numeric_free && dz == 0.0)
        throw std::domain_error("R-free part by quadrature needs z != z'");
    if (part == GreenPart::homogeneous) {
        out.entries = vacuum_gf(r, rp, w).entries;
        return out;
    }
    if (part == GreenPart::whole && !numeric_free) out.entries = vacuum_gf(r, rp, w).entries;
    const bool mirror = env.substrate.kind == MaterialKind::perfect_mirror;
    const bool vacuum_sub = env.substrate.kind == MaterialKind::vacuum;
    if (vacuum_sub && !numeric_free) return out;

    const Eigen::Vector2d rho(r.x() - rp.x(), r.y() - rp.y());
    const double zsum = r.z() + rp.z();
    const double s = dz >= 0.0 ? 1.0 : -1.0;
    const double d = numeric_free ? std::abs(dz) : zsum;
    const double lambda = truncation_radius(w, d, cfg);
    RadialLine line = make_radial_line(w, lambda, cfg.split_at_branch_point);
    Complex eps = 1.0;
    if (!mirror && !vacuum_sub) eps = permittivity(env.substrate, w);

    auto g = [&](int seg, double t) -> Matrix3c {
        RadialNode n = line.node(seg, t);
        if (n.k == 0.0) return Matrix3c::Zero();
        Azimuthal az(n.k, rho);
        Matrix3c m = Matrix3c::Zero();
        if (!vacuum_sub) {
            Complex rte, rtm;
            if (mirror) {
                rte = -1.0;
                rtm = 1.0;
            } else {
                Complex kd = kz_medium(eps, w, n.k);
                rte = (n.k_z - kd) / (n.k_z + kd);
                rtm = (eps * n.k_z - kd) / (eps * n.k_z + kd);
            }
            Blocks b = polarisation_blocks(n.k, n.k_z, w, az, true, s);
            m += (rte * b.te + rtm * b.tm) * std::exp(I * n.k_z * zsum);
        }
        if (numeric_free) {
            Blocks b = polarisation_blocks(n.k, n.k_z, w, az, false, s);
            m += (b.te + b.tm) * std::exp(I * n.k_z * std::abs(dz));
        }
        // (i / 8 pi^2) k dk / (k^2 k_z)
        return m * (I / (8 * pi * pi) / n.k * n.jac_over_kz);
    };
    auto res = gk_integrate_plain<Matrix3c>(g, line.panels(), {cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions});
    out.entries += res.value;
    out.error = res.error_estimate;
    out.converged = res.converged;
    return out;
}

std::pair<double, double> halfspace_decay_closed_forms(double z, double w) {
    if (!(z > 0.0) || !(w > 0.0)) throw std::domain_error("closed forms need z > 0 and omega_A > 0");
    const double x = 2 * w * z;
    const double par = ((1 - 4 * w * w * z * z) * std::sin(x) - x * std::cos(x)) / (16 * pi * z * z * z);
    const double perp = (std::sin(x) - x * std::cos(x)) / (8 * pi * z * z * z);
    return {par, perp};
}

}  // namespace lithoqed
