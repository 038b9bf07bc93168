#include "lithoqed/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lithoqed {

double gamma0(const AtomModel& atom) {
    const double w = atom.omega_A;
    return w * w * w * atom.dipole * atom.dipole / (3 * pi);
}

double u0_reference(const AtomModel& atom, double z) {
    if (!(z > 0.0)) throw std::domain_error("reference potential needs z > 0");
    return -atom.dipole * atom.dipole / (48 * pi * z * z * z);
}

double f0_reference(const AtomModel& atom, double z) {
    if (!(z > 0.0)) throw std::domain_error("reference force needs z > 0");
    return -atom.dipole * atom.dipole / (16 * pi * z * z * z * z);
}

Complex dipole_contract(const AtomModel& atom, const Matrix3c& m) {
    const double d2 = atom.dipole * atom.dipole;
    if (atom.isotropic) return d2 * m.trace() / 3.0;
    const Vec3 n = atom.direction.normalized();
    return d2 * (n.cast<Complex>().transpose() * m * n.cast<Complex>())(0, 0);
}

EntryMask dipole_mask(const AtomModel& atom) {
    if (atom.isotropic) return diagonal_entries;
    const Vec3 n = atom.direction.normalized();
    EntryMask m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[3 * i + j] = n[i] != 0.0 && n[j] != 0.0;
    return m;
}

DecayRateResult decay_rate(const AtomModel& atom, const GreenTensor& g, bool gamma0_included) {
    atom.validate();
    if (std::abs(g.omega - Complex(atom.omega_A)) > 1e-12 * atom.omega_A)
        throw std::domain_error("Green tensor frequency differs from the atomic transition frequency");
    if (g.part == GreenPart::homogeneous) throw std::domain_error("decay_rate expects the scattering tensor");
    const double w = atom.omega_A;
    DecayRateResult out;
    out.position = g.r;
    out.gamma_0 = gamma0_included ? gamma0(atom) : 0.0;
    const Matrix3c im = g.entries.imag().cast<Complex>();
    out.delta_gamma_surface = 2 * w * w * dipole_contract(atom, im).real();
    out.gamma_total = out.gamma_0 + out.delta_gamma_surface;
    out.error = 2 * w * w * atom.dipole * atom.dipole * g.error;
    out.converged = g.converged;
    return out;
}

DecayRateResult decay_rate_deposition(const AtomModel& atom, const HalfSpaceEnvironment& env,
                                      const DepositionGeometry& geo, const Vec3& r, const QuadratureConfig& cfg) {
    atom.validate();
    if (geo.contains(r)) throw std::domain_error("decay rate requested inside the deposition");
    const Complex w(atom.omega_A);
    DecayRateResult out = decay_rate(atom, halfspace_gf(env, r, r, w, GreenPart::scattering, cfg), true);
    BornRequest req;
    req.variant = BornVariant::whole;
    req.mask = dipole_mask(atom);
    // Im(de J) needs only Im J for a real contrast
    req.imag_only = geo.delta_eps(w).imag() == 0.0;
    const auto born = born_correction(env, geo, r, r, w, cfg, req);
    const double w2 = atom.omega_A * atom.omega_A;
    out.delta_gamma_deposition = 2 * w2 * dipole_contract(atom, born.value.imag().cast<Complex>()).real();
    out.gamma_total = out.gamma_0 + out.delta_gamma_surface + out.delta_gamma_deposition;
    out.error += 2 * w2 * atom.dipole * atom.dipole * born.error_estimate;
    out.evaluations = born.evaluations;
    out.converged = out.converged && born.converged;
    return out;
}

double distance_to_deposition(const DepositionGeometry& geo, const Vec3& r) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : geo.boxes) {
        const double dx = std::max({b.x.lo - r.x(), 0.0, r.x() - b.x.hi});
        const double dy = std::max({b.y.lo - r.y(), 0.0, r.y() - b.y.hi});
        const double dz = std::max({b.z.lo - r.z(), 0.0, r.z() - b.z.hi});
        d = std::min(d, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return d;
}

namespace {

// xi^2 alpha(i xi) / 2 pi times the contraction weight: Tr for isotropic atoms, 3 n.G.n otherwise,
// which dipole_contract already carries as |d|^2/3 Tr and |d|^2 n.G.n.
double cp_weight(const AtomModel& atom, double xi) {
    const double w = atom.omega_A;
    return xi * xi * 2.0 * w / (w * w + xi * xi) / (2 * pi);
}

}  // namespace

CPResult cp_potential(const AtomModel& atom, const HalfSpaceEnvironment& env, const DepositionGeometry& geo,
                      const Vec3& r, const QuadratureConfig& cfg, const CPPlan* frozen, CPPlan* record) {
    atom.validate();
    if (!(r.z() > 0.0)) throw std::domain_error("CP potential needs z > 0");
    if (geo.contains(r)) throw std::domain_error("CP potential requested inside the deposition");
    CPResult out;
    out.position = r;
    out.u0_reference = u0_reference(atom, r.z());

    // planar part: cheap, so it is resolved far below the requested tolerance to stay smooth in r
    QuadratureConfig hcfg = cfg;
    hcfg.rel_tol = std::min(cfg.rel_tol, 1e-9);
    hcfg.abs_tol = 0.0;
    bool hs_ok = true;
    auto hs = integrate_xi(
        [&](double xi) {
            const GreenTensor g = halfspace_gf(env, r, r, Complex(0.0, xi), GreenPart::scattering, hcfg);
            hs_ok = hs_ok && g.converged;
            return cp_weight(atom, xi) * dipole_contract(atom, g.entries).real();
        },
        atom, hcfg);
    out.u_halfspace = hs.value;
    out.error = hs.error_estimate;
    out.converged = hs.converged && hs_ok;

    if (!geo.boxes.empty()) {
        // the correction is resolved relative to the bare half-space potential (the scale of U/U0);
        // the trace cancels strongly between components, so the per-xi tensors get half the budget
        // absolute floors scale with the contrast (capped where the Born series stops making
        // sense), so every adaptive decision is the same for de and de/2 and the result is linear
        const double de_ref = std::min(1.0, std::abs(geo.delta_eps(Complex(0.0, atom.omega_A))));
        const double scale =
            de_ref * (out.u_halfspace != 0.0 ? std::abs(out.u_halfspace) : std::abs(out.u0_reference));
        QuadratureConfig bcfg = cfg, xcfg = cfg;
        bcfg.rel_tol = 0.5 * cfg.rel_tol;
        xcfg.abs_tol = std::max(de_ref * cfg.abs_tol, cfg.rel_tol * scale);
        MomentCache cache;
        BornRequest req;
        req.variant = BornVariant::scattering;
        req.mask = dipole_mask(atom);
        // every path through the deposition decays at least like exp(-2 xi d)
        const double xi_max = truncation_decay_exponent(cfg) / (2 * distance_to_deposition(geo, r));
        const double w = atom.omega_A, u_max = std::asinh(xi_max / w);
        const double d2 = atom.dipole * atom.dipole;
        auto g = [&](double xi, const QuadPlan* fc, QuadPlan* rc) {
            IntegralResultT<double> v;
            const double wgt = cp_weight(atom, xi);
            if (wgt == 0.0 || d2 == 0.0) return v;
            // the absolute budget rel |U| is spread evenly over the mapped variable u, so a small
            // correction is not resolved far beyond what U itself needs
            // (Born tolerances are per unit contrast)
            QuadratureConfig c = bcfg;
            const double de = std::abs(geo.delta_eps(Complex(0.0, xi)));
            if (de == 0.0) return v;
            c.abs_tol = std::max(bcfg.abs_tol, 0.5 * cfg.rel_tol * scale /
                                                   (d2 * wgt * std::sqrt(w * w + xi * xi) * u_max * de));
            BornPlan fp, rp;
            if (fc) fp.quad = *fc;
            auto b = born_correction(env, geo, r, r, Complex(0.0, xi), c, req, fc ? &fp : nullptr,
                                     rc ? &rp : nullptr, &cache);
            if (rc) *rc = std::move(rp.quad);
            v.value = wgt * dipole_contract(atom, b.value).real();
            v.error_estimate = wgt * atom.dipole * atom.dipole * b.error_estimate;
            v.evaluations = b.evaluations;
            v.converged = b.converged;
            return v;
        };
        auto res = integrate_xi_sinh<double>(g, atom.omega_A, xi_max, xcfg, frozen ? &frozen->xi : nullptr,
                                               record ? &record->xi : nullptr);
        out.delta_u_deposition = res.value;
        out.error += res.error_estimate;
        out.evaluations = res.evaluations;
        out.converged = out.converged && res.converged;
    }
    out.u_total = out.u_halfspace + out.delta_u_deposition;
    return out;
}

double force_step(const DepositionGeometry& geo, const Vec3& r) {
    return 0.1 * std::min(r.z(), distance_to_deposition(geo, r));
}

ForceResult cp_force(const AtomModel& atom, const HalfSpaceEnvironment& env, const DepositionGeometry& geo,
                     const Vec3& r, const Vec3& direction, const QuadratureConfig& cfg, const CPPlan* plan_in) {
    if (!(direction.norm() > 0.0)) throw std::domain_error("force direction must be nonzero");
    const Vec3 n = direction.normalized();
    const double h = force_step(geo, r);
    if (!(h > 1e-6 * std::max(1.0, r.z()))) throw std::domain_error("force step underflow: point too close to a surface");
    CPPlan own;
    bool ok = true;
    if (!plan_in) ok = cp_potential(atom, env, geo, r, cfg, nullptr, &own).converged;
    const CPPlan* plan = plan_in ? plan_in : &own;
    auto U = [&](double t) { return cp_potential(atom, env, geo, r + t * n, cfg, plan); };
    ForceResult out;
    out.step = h;
    out.f0_reference = f0_reference(atom, r.z());
    const CPResult p1 = U(h), m1 = U(-h), p2 = U(0.5 * h), m2 = U(-0.5 * h);
    const double d1 = (p1.u_total - m1.u_total) / (2 * h);
    const double d2 = (p2.u_total - m2.u_total) / h;
    const double d = (4 * d2 - d1) / 3;
    out.value = -d;
    out.error = std::abs(d - d2);
    out.converged = ok && p1.converged && m1.converged && p2.converged && m2.converged;
    return out;
}

}  // namespace lithoqed
