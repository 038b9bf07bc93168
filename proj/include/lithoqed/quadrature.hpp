#pragma once

#include "lithoqed/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace lithoqed {

enum class TruncationPolicy { auto_exponential, fixed };

struct QuadratureConfig {
    double rel_tol = 1e-4;
    double abs_tol = 1e-10;
    int max_subdivisions = 200;
    TruncationPolicy k_truncation_policy = TruncationPolicy::auto_exponential;
    double fixed_lambda = 60.0;
    int xi_nodes = 4;  // initial panels of the xi integral
    bool split_at_branch_point = true;

    void validate() const;
};



// ---- value traits: everything is flattened to real components for error control

inline int qsize(double) { return 1; }
inline int qsize(const Complex&) { return 2; }
template <class D>
int qsize(const Eigen::DenseBase<D>& v) {
    using S = typename D::Scalar;
    return static_cast<int>(v.size()) * (std::is_same_v<S, Complex> ? 2 : 1);
}

inline double qget(double v, int) { return v; }
inline double qget(const Complex& v, int i) { return i == 0 ? v.real() : v.imag(); }
template <class D>
double qget(const Eigen::DenseBase<D>& v, int i) {
    using S = typename D::Scalar;
    if constexpr (std::is_same_v<S, Complex>) {
        const Complex& c = v.derived().reshaped()(i / 2);
        return (i % 2) ? c.imag() : c.real();
    } else {
        return v.derived().reshaped()(i);
    }
}

template <class V>
V qzero_like(const V& v) {
    if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, Complex>) {
        return V{};
    } else {
        V z = v;
        z.setZero();
        return z;
    }
}

template <class V>
V qzero() {
    if constexpr (requires { V::Zero(); }) {
        return V::Zero();
    } else {
        return V{};
    }
}

template <class V>
double qnorm(const V& v) {
    double m = 0.0;
    for (int i = 0; i < qsize(v); ++i) m = std::max(m, std::abs(qget(v, i)));
    return m;
}

template <class V>
struct IntegralResultT {
    V value = qzero<V>();
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

using IntegralResult = IntegralResultT<Complex>;

// ---- panels and plans

struct Panel {
    double a;
    double b;
    int segment = 0;
};

// A frozen quadrature tree: final panels plus, for nested integrals, one child plan per node.
struct QuadPlan {
    std::vector<Panel> panels;
    std::vector<QuadPlan> children;
    bool empty() const { return panels.empty(); }
};

struct Tolerance {
    double rel;
    double abs;
    int max_subdivisions;
};

namespace gk15 {
inline constexpr std::array<double, 8> xk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
inline constexpr int n = 15;

// node i in [0,15): 0..6 left, 7 centre, 8..14 right
inline double node(int i) { return i < 7 ? -xk[i] : (i == 7 ? 0.0 : xk[14 - i]); }
inline double kweight(int i) { return i <= 7 ? wk[i] : wk[14 - i]; }
inline double gweight(int i) {
    int j = i <= 7 ? i : 14 - i;
    if (j % 2 == 0) return 0.0;
    return wg[j / 2];
}
}  // namespace gk15

template <class V>
struct PanelResult {
    Panel panel;
    V value;
    double error = 0.0;
    double child_error = 0.0;
    bool child_converged = true;
    std::vector<QuadPlan> children;
};

// Evaluates one panel. f(segment, t, const QuadPlan* frozen_child, QuadPlan* record_child) -> IntegralResultT<V>
template <class V, class F>
PanelResult<V> gk15_panel(F& f, const Panel& p, const std::vector<QuadPlan>* frozen_children, bool record,
                          long& evals) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    std::array<V, 15> fv;
    PanelResult<V> out;
    out.panel = p;
    if (record) out.children.resize(15);
    for (int i = 0; i < 15; ++i) {
        const QuadPlan* fc = frozen_children ? &(*frozen_children)[i] : nullptr;
        QuadPlan* rc = record ? &out.children[i] : nullptr;
        IntegralResultT<V> r = f(p.segment, c + h * gk15::node(i), fc, rc);
        fv[i] = r.value;
        evals += r.evaluations;
        out.child_error += h * gk15::kweight(i) * r.error_estimate;
        out.child_converged = out.child_converged && r.converged;
    }
    V k = qzero_like(fv[0]);
    V g = qzero_like(fv[0]);
    for (int i = 0; i < 15; ++i) {
        k = k + fv[i] * gk15::kweight(i);
        double gw = gk15::gweight(i);
        if (gw != 0.0) g = g + fv[i] * gw;
    }
    out.value = k * h;
    // QUADPACK-style error estimate, component-wise, max over components
    const int m = qsize(fv[0]);
    const double eps = std::numeric_limits<double>::epsilon();
    double err = 0.0;
    for (int comp = 0; comp < m; ++comp) {
        double kc = qget(k, comp), gc = qget(g, comp);
        double mean = 0.5 * kc, resasc = 0.0, resabs = 0.0;
        for (int i = 0; i < 15; ++i) {
            double v = qget(fv[i], comp);
            resasc += gk15::kweight(i) * std::abs(v - mean);
            resabs += gk15::kweight(i) * std::abs(v);
        }
        resasc *= std::abs(h);
        resabs *= std::abs(h);
        double e = std::abs((kc - gc) * h);
        if (resasc != 0.0 && e != 0.0) e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
        if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) e = std::max(e, 50.0 * eps * resabs);
        err = std::max(err, e);
    }
    out.error = err;
    return out;
}

// Globally adaptive (or frozen) Gauss-Kronrod integration over a list of panels.
// When `frozen` is given the panels and child plans are reused verbatim.
template <class V, class F>
IntegralResultT<V> gk_integrate(F&& f, const std::vector<Panel>& initial, const Tolerance& tol,
                                const QuadPlan* frozen = nullptr, QuadPlan* record = nullptr) {
    long evals = 0;
    std::vector<PanelResult<V>> done;
    if (frozen) {
        const bool nested = !frozen->children.empty();
        for (std::size_t i = 0; i < frozen->panels.size(); ++i) {
            std::vector<QuadPlan> kids;
            const std::vector<QuadPlan>* kp = nullptr;
            if (nested) {
                kids.assign(frozen->children.begin() + 15 * i, frozen->children.begin() + 15 * (i + 1));
                kp = &kids;
            }
            done.push_back(gk15_panel<V>(f, frozen->panels[i], kp, false, evals));
        }
    } else {
        auto cmp = [](const PanelResult<V>& x, const PanelResult<V>& y) {
            if (x.error != y.error) return x.error < y.error;
            return x.panel.a > y.panel.a;  // deterministic tie-break
        };
        std::priority_queue<PanelResult<V>, std::vector<PanelResult<V>>, decltype(cmp)> heap(cmp);
        V total = qzero<V>();
        bool first = true;
        double err_total = 0.0, child_total = 0.0;
        for (const auto& p : initial) {
            auto r = gk15_panel<V>(f, p, nullptr, record != nullptr, evals);
            total = first ? r.value : V(total + r.value);
            first = false;
            err_total += r.error;
            child_total += r.child_error;
            heap.push(std::move(r));
        }
        int subdivisions = 0;
        while (!heap.empty() && subdivisions < tol.max_subdivisions) {
            const double target = std::max(tol.abs, tol.rel * qnorm(total));
            if (err_total + child_total <= target) break;
            // outer refinement cannot fix the inner error; stop once the outer rule has its share
            if (err_total <= std::max(0.5 * target, target - child_total)) break;
            PanelResult<V> worst = heap.top();
            heap.pop();
            const double mid = 0.5 * (worst.panel.a + worst.panel.b);
            if (!(mid > worst.panel.a && mid < worst.panel.b)) {
                heap.push(std::move(worst));
                break;
            }
            auto l = gk15_panel<V>(f, {worst.panel.a, mid, worst.panel.segment}, nullptr, record != nullptr, evals);
            auto r = gk15_panel<V>(f, {mid, worst.panel.b, worst.panel.segment}, nullptr, record != nullptr, evals);
            total = total - worst.value + l.value + r.value;
            err_total += l.error + r.error - worst.error;
            child_total += l.child_error + r.child_error - worst.child_error;
            heap.push(std::move(l));
            heap.push(std::move(r));
            ++subdivisions;
        }
        while (!heap.empty()) {
            done.push_back(heap.top());
            heap.pop();
        }
        std::sort(done.begin(), done.end(), [](const PanelResult<V>& x, const PanelResult<V>& y) {
            if (x.panel.segment != y.panel.segment) return x.panel.segment < y.panel.segment;
            return x.panel.a < y.panel.a;
        });
    }
    IntegralResultT<V> res;
    bool first = true;
    double err = 0.0;
    for (auto& d : done) {
        res.value = first ? d.value : V(res.value + d.value);
        first = false;
        err += d.error + d.child_error;
    }
    if (first) res.value = qzero<V>();
    res.error_estimate = err;
    res.evaluations = evals;
    // child errors are already in err; a child line missing its own target only matters through them
    res.converged = err <= std::max(tol.abs, tol.rel * qnorm(res.value));
    if (record) {
        record->panels.clear();
        record->children.clear();
        for (auto& d : done) {
            record->panels.push_back(d.panel);
            for (auto& c : d.children) record->children.push_back(std::move(c));
        }
        bool any = false;
        for (const auto& c : record->children) any = any || !c.empty();
        if (!any) record->children.clear();
    }
    return res;
}

// Leaf helper: plain integrand g(t) -> V
template <class V, class G>
IntegralResultT<V> gk_integrate_plain(G&& g, const std::vector<Panel>& initial, const Tolerance& tol,
                                      const QuadPlan* frozen = nullptr, QuadPlan* record = nullptr) {
    auto f = [&](int seg, double t, const QuadPlan*, QuadPlan*) {
        IntegralResultT<V> r;
        r.value = g(seg, t);
        r.evaluations = 1;
        return r;
    };
    return gk_integrate<V>(f, initial, tol, frozen, record);
}

// ---- radial lines with branch-point regularising maps

enum class RadialMapKind {
    linear,  // k = t
    sine,    // k = w sin t, t in [0, pi/2]; dk = k_z dt
    cosh     // k = w cosh t, t >= 0; dk = |k_z| dt
};

struct RadialSegment {
    double t0;
    double t1;
    RadialMapKind map;
};

struct RadialNode {
    double k;
    double jacobian;  // dk/dt
    Complex k_z;      // accurate k_z at this node
    Complex jac_over_kz;  // (dk/dt)/k_z, finite at the branch point
};

struct RadialLine {
    Complex omega;
    std::vector<RadialSegment> segments;

    RadialNode node(int segment, double t) const;
    std::vector<Panel> panels(int per_segment = 1) const;
};

// Radial line on [0, lambda], split at the branch point for real frequencies.
RadialLine make_radial_line(Complex omega, double lambda, bool split_at_branch_point = true);

// Truncation radius such that exp(-sqrt(L^2 - w^2) d) stays below 0.01*tol with a polynomial margin.
double truncation_radius(Complex omega, double decay_distance, const QuadratureConfig& cfg);
double truncation_decay_exponent(const QuadratureConfig& cfg);

// Nested radial pair integral over (k, k'): f(outer node, inner node) -> V.
// `inner_line(outer node)` gives the inner domain, which may depend on k.
template <class V, class F, class InnerLine>
IntegralResultT<V> integrate_radial_pair(F&& f, const RadialLine& outer, InnerLine&& inner_line,
                                         const QuadratureConfig& cfg, const QuadPlan* frozen = nullptr,
                                         QuadPlan* record = nullptr) {
    Tolerance tol{cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions};
    Tolerance tin{cfg.rel_tol * 0.5, cfg.abs_tol, cfg.max_subdivisions};  // captured by reference below
    auto outer_f = [&](int seg, double t, const QuadPlan* fc, QuadPlan* rc) {
        RadialNode kn = outer.node(seg, t);
        RadialLine in = inner_line(kn);
        auto g = [&](int s2, double t2) -> V {
            RadialNode kn2 = in.node(s2, t2);
            return V(f(kn, kn2) * kn2.jacobian);
        };
        IntegralResultT<V> r;
        if (in.segments.empty()) {
            if (rc) rc->panels.clear();
            return r;
        }
        r = gk_integrate_plain<V>(g, in.panels(), tin, fc, rc);
        r.value = r.value * kn.jacobian;
        r.error_estimate *= std::abs(kn.jacobian);
        return r;
    };
    if (!frozen && !outer.segments.empty()) {
        // coarse pass on the initial panels sets an absolute floor for the inner integrals, so
        // that inner lines contributing little to the total are not refined to their own rel_tol
        const Tolerance tin_rel = tin;
        tin.max_subdivisions = 0;
        const auto coarse = gk_integrate<V>(outer_f, outer.panels(), Tolerance{tol.rel, tol.abs, 0});
        const auto& last = outer.segments.back();
        const double span = outer.node(int(outer.segments.size()) - 1, last.t1).k;
        tin = tin_rel;
        // inner errors add up over the outer span, so the inner absolute budget is a share of it
        if (span > 0.0) tin.abs = std::max(0.5 * cfg.abs_tol, 0.25 * cfg.rel_tol * qnorm(coarse.value)) / span;
    }
    return gk_integrate<V>(outer_f, outer.panels(), tol, frozen, record);
}

// Periodic trapezoid node count resolving a band limit B = k*R (plus a polynomial degree).
int angular_nodes(double band_limit);

// Generic (k, phi, k', phi') integral: angular integrals by periodic trapezoid refined by doubling.
using K4Integrand = std::function<Complex(double k, double phi, double kp, double phip)>;
struct K4Domain {
    RadialLine outer;
    std::function<RadialLine(const RadialNode&)> inner;
};
IntegralResult integrate_k4(const K4Integrand& f, const K4Domain& domain, const QuadratureConfig& cfg);

// Semi-infinite xi integral, xi = w t/(1-t). g(xi, frozen child, record child) -> IntegralResultT<V>.
template <class V, class F>
IntegralResultT<V> integrate_xi_nested(F&& g, double omega_scale, const QuadratureConfig& cfg,
                                       const QuadPlan* frozen = nullptr, QuadPlan* record = nullptr) {
    if (!(omega_scale > 0.0)) throw std::domain_error("xi substitution scale must be positive");
    std::vector<Panel> panels;
    const int n = std::max(1, cfg.xi_nodes);
    for (int i = 0; i < n; ++i) panels.push_back({double(i) / n, double(i + 1) / n, 0});
    auto f = [&](int, double t, const QuadPlan* fc, QuadPlan* rc) {
        const double xi = omega_scale * t / (1.0 - t);
        const double jac = omega_scale / ((1.0 - t) * (1.0 - t));
        IntegralResultT<V> r = g(xi, fc, rc);
        r.value = r.value * jac;
        r.error_estimate *= jac;
        return r;
    };
    return gk_integrate<V>(f, panels, {cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions}, frozen, record);
}

// Finite xi range for integrands with two scales: xi = omega sinh(u), u in [0, asinh(xi_max/omega)].
// The Lorentzian alpha(i xi) dxi becomes du/cosh(u); structure at xi ~ 1/d stays O(1) wide in u.
template <class V, class F>
IntegralResultT<V> integrate_xi_sinh(F&& g, double omega_scale, double xi_max, const QuadratureConfig& cfg,
                                     const QuadPlan* frozen = nullptr, QuadPlan* record = nullptr) {
    if (!(omega_scale > 0.0) || !(xi_max > 0.0)) throw std::domain_error("xi range needs positive scales");
    const double umax = std::asinh(xi_max / omega_scale);
    std::vector<Panel> panels;
    const int n = std::max(1, cfg.xi_nodes);
    for (int i = 0; i < n; ++i) panels.push_back({umax * i / n, umax * (i + 1) / n, 0});
    auto f = [&](int, double u, const QuadPlan* fc, QuadPlan* rc) {
        const double xi = omega_scale * std::sinh(u);
        const double jac = omega_scale * std::cosh(u);
        IntegralResultT<V> r = g(xi, fc, rc);
        r.value = r.value * jac;
        r.error_estimate *= jac;
        return r;
    };
    return gk_integrate<V>(f, panels, {cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions}, frozen, record);
}

struct AtomModel;
// integrand(xi) real; substitution scale is the atomic transition frequency
IntegralResultT<double> integrate_xi(const std::function<double(double)>& integrand, const AtomModel& atom,
                                     const QuadratureConfig& cfg);

}  // namespace lithoqed
