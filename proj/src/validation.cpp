#include "lithoqed/validation.hpp"

#include "lithoqed/born.hpp"
#include "lithoqed/observables.hpp"
#include "lithoqed/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace lithoqed {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(double v, int digits = 2) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

std::string fixed(double v, int digits = 4) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

QuadratureConfig tight() {
    QuadratureConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-14;
    c.max_subdivisions = 400;
    return c;
}

double max_rel(const Matrix3c& a, const Matrix3c& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

// Finishes a result: the runtime limit is part of passing.
CheckResult finish(CheckResult r, bool accurate, const std::string& detail, Clock::time_point t0) {
    r.seconds = since(t0);
    r.passed = accurate && (r.budget_seconds <= 0.0 || r.seconds < r.budget_seconds);
    r.detail = detail;
    if (r.budget_seconds > 0.0 && r.seconds >= r.budget_seconds)
        r.detail += "; runtime " + fixed(r.seconds, 1) + " s over the " + fixed(r.budget_seconds, 0) + " s budget";
    return r;
}

}  // namespace

ValidationPlan ValidationPlan::quick() {
    ValidationPlan p;
    p.curve_points = 20;
    p.kernel_samples = 10;
    p.riemann_cells = {5, 10};
    p.reciprocity_pairs = 10;
    p.gradient_positions = 0;
    p.grating = false;
    return p;
}

ValidationPlan ValidationPlan::full() { return {}; }

CheckResult check_free_space_rate() {
    const auto t0 = Clock::now();
    CheckResult r{1, "free-space rate", false, "", 0.0, 1.0};
    double worst = 0.0;
    for (double w : {0.5, 1.0, 2.0}) {
        auto im = vacuum_gf_im_coincident(Complex(w), tight());
        worst = std::max(worst, std::abs(im.value(2, 2).real() / (w / (6 * pi)) - 1.0));
    }
    return finish(r, worst < 1e-6, "Im W_zz(r, r) vs w/6pi: worst rel err " + sci(worst) + " (< 1e-6)", t0);
}

CheckResult check_mirror_limits(int n) {
    const auto t0 = Clock::now();
    CheckResult r{2, "mirror limits", false, "", 0.0, 10.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    const auto par = AtomModel::oriented(1.0, Vec3::UnitX());
    const auto perp = AtomModel::oriented(1.0, Vec3::UnitZ());
    auto rates = [&](double z) {
        auto g = halfspace_gf(mirror, Vec3(0, 0, z), Vec3(0, 0, z), Complex(1.0), GreenPart::scattering, tight());
        return std::pair{decay_rate(par, g).gamma_total / gamma0(par), decay_rate(perp, g).gamma_total / gamma0(perp)};
    };
    const auto [p0, q0] = rates(1e-3);
    const bool limits = std::abs(q0 - 2.0) <= 0.005 && std::abs(p0) <= 0.005;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = 0.1 * std::pow(100.0, n > 1 ? double(i) / (n - 1) : 0.0);
        const auto [p, q] = rates(z);
        const auto [dp, dq] = halfspace_decay_closed_forms(z, 1.0);
        const double g0 = 1.0 / (3 * pi);
        worst = std::max({worst, std::abs(p / (1 + dp / g0) - 1), std::abs(q / (1 + dq / g0) - 1)});
    }
    return finish(r, limits && worst < 1e-4,
                  "w z = 1e-3: Gperp/G0 = " + fixed(q0) + ", Gpar/G0 = " + fixed(p0) + " (+-0.005); " +
                      std::to_string(n) + "-point curves on [0.1, 10]: worst rel dev " + sci(worst) + " (< 1e-4)",
                  t0);
}

CheckResult check_kernel_catalogue(int samples) {
    const auto t0 = Clock::now();
    CheckResult r{3, "kernel catalogue", false, "", 0.0, 30.0};
    std::mt19937_64 rng(3);
    OracleConfig oc;
    double worst_op = 0.0, worst_sym = 0.0;
    long plane_zero_misses = 0, other_zero_misses = 0;
    const int plane_zero_entries = 3 * 3 * 2;  // TE, TETE, TETM x (xz, zx, zz) x both orderings
    for (int n = 0; n < samples; ++n)
        for (auto ord : {Ordering::greater, Ordering::lesser}) {
            const KernelSample s = random_kernel_sample(ord, rng);
            auto K = [&](KernelType tau, int i, int j, const WaveContext& a, const WaveContext& b) {
                return kernel_entry(tau, i, j, ord, a, b, s.s.z(), s.r.z(), s.r_prime.z());
            };
            for (auto tau : {KernelType::TE, KernelType::TETE, KernelType::TETM})
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        if (i != 2 && j != 2) continue;
                        const bool in_plane = i != 1 && j != 1;
                        if (K(tau, i, j, s.ctx, s.ctx_prime) != Complex(0.0))
                            ++(in_plane ? plane_zero_misses : other_zero_misses);
                    }
            const WaveContext a = s.ctx.swapped_xy(), b = s.ctx_prime.swapped_xy();
            for (auto tau : all_kernel_types) {
                worst_op = std::max(worst_op, kernel_operator_check(tau, ord, s, oc).max_deviation);
                auto dev = [](Complex u, Complex v) { return std::abs(u - v) / std::max(1.0, std::abs(v)); };
                worst_sym = std::max({worst_sym, dev(K(tau, 1, 1, s.ctx, s.ctx_prime), K(tau, 0, 0, a, b)),
                                      dev(K(tau, 1, 2, s.ctx, s.ctx_prime), K(tau, 0, 2, a, b)),
                                      dev(K(tau, 2, 1, s.ctx, s.ctx_prime), K(tau, 2, 0, a, b)),
                                      dev(K(tau, 1, 0, s.ctx, s.ctx_prime), K(tau, 0, 1, s.ctx, s.ctx_prime))});
            }
        }
    const bool ok = worst_op < 1e-6 && plane_zero_misses == 0 && other_zero_misses == 0 && worst_sym <= 1e-12;
    std::ostringstream d;
    d << samples << " samples per ordering: worst operator deviation " << sci(worst_op) << " (< 1e-6); "
      << plane_zero_entries << " xz-plane zero entries (12 more y-analogues) nonzero " << plane_zero_misses + other_zero_misses
      << " times (0); worst xy-symmetry deviation " << sci(worst_sym) << " (<= 1e-12)";
    return finish(r, ok, d.str(), t0);
}

CheckResult check_born_oracle(const std::vector<int>& cells, int threads) {
    const auto t0 = Clock::now();
    CheckResult r{4, "Born oracle equivalence", false, "", 0.0, 600.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    const auto geo = build_cube(1.0, MaterialModel::constant(1.8));
    const Vec3 p(0.2, -0.1, 2.0);
    QuadratureConfig q;
    q.rel_tol = 1e-8;
    const auto exact = born_correction(mirror, geo, p, p, Complex(1.0), q);
    OracleConfig oc;
    oc.threads = threads;
    QuadratureConfig qq;
    qq.rel_tol = 1e-9;
    std::vector<double> err;
    std::ostringstream d;
    d << "at (0.2, -0.1, 2.0), w = 1: rel diff";
    for (int n : cells) {
        oc.cells_per_axis = n;
        const auto o = born_correction_riemann(mirror, geo, p, p, Complex(1.0), oc, qq);
        err.push_back((o.value - exact.value).norm() / exact.value.norm());
        d << " n=" << n << ": " << sci(err.back());
    }
    const int last = int(cells.size()) - 1;
    double order = 0.0;
    if (last >= 1) order = std::log(err[last - 1] / err[last]) / std::log(double(cells[last]) / cells[last - 1]);
    // thresholds are those of 40 cells, rescaled at second order for coarser grids
    const double limit = 1e-3 * std::pow(40.0 / cells[last], 2);
    d << "; limit " << sci(limit) << "; observed order " << fixed(order, 2) << " (2.0 +- 0.3)";
    return finish(r, exact.converged && err[last] < limit && std::abs(order - 2.0) <= 0.3, d.str(), t0);
}

CheckResult check_cp_reference() {
    const auto t0 = Clock::now();
    CheckResult r{5, "non-retarded CP reference", false, "", 0.0, 60.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    const auto atom = AtomModel::isotropic_atom(1.0);
    QuadratureConfig q;
    q.rel_tol = 1e-6;
    const Vec3 p(0, 0, 0.01);
    const auto u = cp_potential(atom, mirror, DepositionGeometry{}, p, q);
    const auto f = cp_force(atom, mirror, DepositionGeometry{}, p, Vec3::UnitZ(), q);
    const double ur = u.u_total / u.u0_reference, fr = f.value / f.f0_reference;
    return finish(r, std::abs(ur - 1) < 0.02 && std::abs(fr - 1) < 0.02,
                  "w z = 0.01: U/U0 = " + fixed(ur) + ", F/F0 = " + fixed(fr) + " (within 2%)", t0);
}

CheckResult check_gradient_consistency(int positions) {
    const auto t0 = Clock::now();
    CheckResult r{6, "gradient consistency", false, "", 0.0, 600.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    const auto geo = build_grating(GratingSpec{}, MaterialModel::constant(1.8));
    const auto atom = AtomModel::isotropic_atom(0.01);
    QuadratureConfig q;
    q.rel_tol = 1e-2;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ux(-5.0, 6.0), uy(-2.0, 2.0), uz(1.25, 2.0);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int i = 0; i < positions; ++i) {
        const Vec3 p(ux(rng), uy(rng), uz(rng));
        Vec3 n(nd(rng), nd(rng), nd(rng));
        n.normalize();
        CPPlan plan;
        cp_potential(atom, mirror, geo, p, q, nullptr, &plan);
        const double f = cp_force(atom, mirror, geo, p, n, q, &plan).value;
        // separate five-point stencil on a finer step, same frozen potential
        const double h = 0.025 * std::min(p.z(), distance_to_deposition(geo, p));
        auto U = [&](double t) { return cp_potential(atom, mirror, geo, p + t * n, q, &plan).u_total; };
        const double fd = -(U(-2 * h) - 8 * U(-h) + 8 * U(h) - U(2 * h)) / (12 * h);
        worst = std::max(worst, std::abs(f - fd) / std::abs(fd));
    }
    return finish(r, worst < 1e-4,
                  std::to_string(positions) + " random positions and directions above the grating: worst rel diff " +
                      sci(worst) + " (< 1e-4)",
                  t0);
}

namespace {

// Period in [p_lo, p_hi] whose sinusoid (plus offset) explains most of the variance, and that share.
std::pair<double, double> dominant_period(const std::vector<double>& x, const std::vector<double>& y, double p_lo,
                                          double p_hi) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(y.size());
    double total = 0.0;
    for (double v : y) total += (v - mean) * (v - mean);
    double best_p = 0.0, best_share = -1.0;
    for (double period = p_lo; period <= p_hi + 1e-12; period += 1e-3) {
        Eigen::MatrixXd a(x.size(), 3);
        Eigen::VectorXd b(y.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = 2 * pi * x[i] / period;
            a(i, 0) = 1.0;
            a(i, 1) = std::cos(t);
            a(i, 2) = std::sin(t);
            b(i) = y[i];
        }
        const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
        const double share = 1.0 - (a * c - b).squaredNorm() / total;
        if (share > best_share) best_share = share, best_p = period;
    }
    return {best_p, best_share};
}

}  // namespace

CheckResult check_grating_phenomenology(std::ostream* log) {
    const auto t0 = Clock::now();
    CheckResult r{7, "grating phenomenology", false, "", 0.0, 1800.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    const GratingSpec spec;  // N = 5, w = h = 1, L = 5
    const auto geo = build_grating(spec, MaterialModel::constant(1.8));
    const auto atom = AtomModel::isotropic_atom(0.01);
    QuadratureConfig q;
    q.rel_tol = 1e-3;
    const double z = spec.h + 0.25, w = spec.w;
    const double first = geo.boxes.front().x.lo, last = geo.boxes.back().x.hi;
    const double centre0 = first + 0.5 * w;

    // potential along y = 0 from the first to the last strip centre, in quarter-period steps
    std::vector<double> xs, du, ratio;
    bool conv = true;
    for (double x = centre0; x <= last - 0.5 * w + 1e-9; x += 0.5 * w) {
        const auto u = cp_potential(atom, mirror, geo, Vec3(x, 0, z), q);
        xs.push_back(x);
        du.push_back(u.delta_u_deposition);
        ratio.push_back(u.u_total / u.u0_reference);
        conv = conv && u.converged;
        if (log) *log << "  U   x = " << fixed(x, 2) << "  U/U0 = " << fixed(ratio.back(), 6) << '\n';
    }
    const auto [period, share] = dominant_period(xs, du, w, 4 * (last - first));
    const bool period_ok = std::abs(period - 2 * w) < 0.1 * w && share > 0.8;

    // strip centres sit at even multiples of w from the first one, gap centres at odd ones
    double strip_min = INFINITY, gap_max = 0.0;
    for (std::size_t i = 0; i < xs.size(); i += 2) {
        const double s = (xs[i] - centre0) / w;
        const long k = std::lround(s);
        if (std::abs(s - k) > 1e-9) continue;
        if (k % 2 == 0)
            strip_min = std::min(strip_min, std::abs(du[i]));
        else
            gap_max = std::max(gap_max, std::abs(du[i]));
    }
    const bool sign_ok = strip_min > gap_max;

    // lateral force over one period beyond the last strip edge
    std::vector<double> fx, fr;
    bool nonzero = true;
    for (double x = last + 0.25 * w; x <= last + 2 * w + 1e-9; x += 0.5 * w) {
        const auto f = cp_force(atom, mirror, geo, Vec3(x, 0, z), Vec3::UnitX(), q);
        fx.push_back(x);
        fr.push_back(f.value / f.f0_reference);
        conv = conv && f.converged;
        nonzero = nonzero && std::abs(f.value) > 10 * f.error;
        if (log) *log << "  Fx  x = " << fixed(x, 2) << "  F/F0 = " << fixed(fr.back(), 6) << '\n';
    }
    // oscillation: the force or its slope changes sign
    int turns = 0;
    for (std::size_t i = 1; i < fr.size(); ++i) turns += (fr[i] > 0) != (fr[i - 1] > 0);
    for (std::size_t i = 2; i < fr.size(); ++i) turns += (fr[i] - fr[i - 1] > 0) != (fr[i - 1] - fr[i - 2] > 0);
    const bool force_ok = nonzero && turns > 0;

    std::ostringstream d;
    d << "dominant period of delta U " << fixed(period, 3) << " (2w +- 0.1w, share " << fixed(share, 3)
      << "); |delta U| min over strips " << sci(strip_min) << " > max over gaps " << sci(gap_max) << ": "
      << (sign_ok ? "yes" : "no") << "; F/F0 past the edge";
    for (std::size_t i = 0; i < fr.size(); ++i) d << (i ? ", " : " ") << fixed(fr[i], 4) << " @" << fixed(fx[i], 2);
    d << ": " << (nonzero ? "nonzero" : "vanishes") << ", " << turns << " sign change(s) in F or dF/dx";
    if (!conv) d << "; not all points converged";
    return finish(r, period_ok && sign_ok && force_ok && conv, d.str(), t0);
}

CheckResult check_linearity() {
    const auto t0 = Clock::now();
    CheckResult r{8, "linearity in the contrast", false, "", 0.0, 0.0};
    const HalfSpaceEnvironment mirror{MaterialModel::perfect_mirror()};
    QuadratureConfig q;
    q.rel_tol = 1e-5;
    const auto x = AtomModel::oriented(1.0, Vec3::UnitX());
    const Vec3 p(0.3, 0.2, 1.5);
    const auto full = decay_rate_deposition(x, mirror, build_cube(1.0, MaterialModel::constant(1.8)), p, q);
    const auto half = decay_rate_deposition(x, mirror, build_cube(1.0, MaterialModel::constant(1.4)), p, q);
    const double dg = std::abs(2 * half.delta_gamma_deposition - full.delta_gamma_deposition) /
                      std::abs(full.delta_gamma_deposition);
    QuadratureConfig qc;
    qc.rel_tol = 1e-3;
    const auto atom = AtomModel::isotropic_atom(0.05);
    const Vec3 pc(0.2, 0.1, 1.5);
    const auto uf = cp_potential(atom, mirror, build_cube(1.0, MaterialModel::constant(1.8)), pc, qc);
    const auto uh = cp_potential(atom, mirror, build_cube(1.0, MaterialModel::constant(1.4)), pc, qc);
    const double du =
        std::abs(2 * uh.delta_u_deposition - uf.delta_u_deposition) / std::abs(uf.delta_u_deposition);
    // 1.4 - 1 and (1.8 - 1)/2 already differ in the last bits
    const double limit = 1e-14;
    return finish(r, dg < limit && du < limit,
                  "eps 1.8 vs 1.4 cube: delta_gamma_deposition rel dev " + sci(dg) + ", delta_u_deposition rel dev " +
                      sci(du) + " (< " + sci(limit, 0) + ")",
                  t0);
}

CheckResult check_reciprocity(int pairs) {
    const auto t0 = Clock::now();
    CheckResult r{9, "reciprocity", false, "", 0.0, 60.0};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0), h(0.2, 1.5);
    double worst = 0.0;
    for (const auto& m : {MaterialModel::constant(1.8), MaterialModel::perfect_mirror()}) {
        const HalfSpaceEnvironment env{m};
        for (int i = 0; i < pairs; ++i) {
            const Vec3 a(u(rng), u(rng), h(rng)), b(u(rng), u(rng), h(rng));
            const auto ab = halfspace_gf(env, a, b, Complex(1.0), GreenPart::whole, tight());
            const auto ba = halfspace_gf(env, b, a, Complex(1.0), GreenPart::whole, tight());
            worst = std::max(worst, max_rel(ab.entries, ba.entries.transpose()));
        }
    }
    return finish(r, worst < 1e-8,
                  std::to_string(pairs) + " pairs each for eps 1.8 and the mirror: worst rel dev " + sci(worst) +
                      " (< 1e-8)",
                  t0);
}

std::string format_check(const CheckResult& r) {
    std::ostringstream o;
    o << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " (" << fixed(r.seconds, 1)
      << " s)";
    return o.str();
}

std::vector<CheckResult> run_validation(const ValidationPlan& plan, std::ostream& out) {
    std::vector<CheckResult> all;
    auto run = [&](CheckResult r) {
        out << format_check(r) << std::endl;
        all.push_back(std::move(r));
    };
    run(check_free_space_rate());
    run(check_mirror_limits(plan.curve_points));
    run(check_kernel_catalogue(plan.kernel_samples));
    run(check_born_oracle(plan.riemann_cells, plan.threads));
    run(check_cp_reference());
    if (plan.gradient_positions > 0) run(check_gradient_consistency(plan.gradient_positions));
    if (plan.grating) run(check_grating_phenomenology());
    run(check_linearity());
    run(check_reciprocity(plan.reciprocity_pairs));
    return all;
}

}  // namespace lithoqed
