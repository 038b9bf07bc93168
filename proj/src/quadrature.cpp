#include "lithoqed/quadrature.hpp"

#include "lithoqed/atom.hpp"
#include "lithoqed/kinematics.hpp"

namespace lithoqed {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::domain_error("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw std::domain_error("max_subdivisions must be >= 1");
    if (xi_nodes < 1) throw std::domain_error("xi_nodes must be >= 1");
    if (k_truncation_policy == TruncationPolicy::fixed && !(fixed_lambda > 0.0))
        throw std::domain_error("fixed truncation radius must be positive");
}

RadialNode RadialLine::node(int segment, double t) const {
    const RadialSegment& s = segments.at(segment);
    switch (s.map) {
        case RadialMapKind::sine: {
            const double w = omega.real();
            return {w * std::sin(t), w * std::cos(t), Complex(w * std::cos(t), 0.0), Complex(1.0, 0.0)};
        }
        case RadialMapKind::cosh: {
            const double w = omega.real();
            return {w * std::cosh(t), w * std::sinh(t), Complex(0.0, w * std::sinh(t)), Complex(0.0, -1.0)};
        }
        case RadialMapKind::linear: break;
    }
    const Complex k_z = kz(omega, t);
    return {t, 1.0, k_z, 1.0 / k_z};
}

std::vector<Panel> RadialLine::panels(int per_segment) const {
    std::vector<Panel> out;
    for (int s = 0; s < int(segments.size()); ++s) {
        const auto& seg = segments[s];
        int n = per_segment;
        if (seg.map == RadialMapKind::linear) n = std::max(n, 4);
        if (seg.map == RadialMapKind::cosh) n = std::max(n, 2);
        for (int i = 0; i < n; ++i) {
            double a = seg.t0 + (seg.t1 - seg.t0) * i / n;
            double b = seg.t0 + (seg.t1 - seg.t0) * (i + 1) / n;
            out.push_back({a, b, s});
        }
    }
    return out;
}

RadialLine make_radial_line(Complex omega, double lambda, bool split) {
    RadialLine line;
    line.omega = omega;
    if (!(lambda > 0.0)) return line;
    if (omega.imag() == 0.0 && split) {
        const double w = omega.real();
        if (lambda <= w) {
            line.segments.push_back({0.0, std::asin(lambda / w), RadialMapKind::sine});
        } else {
            line.segments.push_back({0.0, pi / 2, RadialMapKind::sine});
            line.segments.push_back({0.0, std::acosh(lambda / w), RadialMapKind::cosh});
        }
        return line;
    }
    if (omega.imag() == 0.0 && omega.real() < lambda) {
        // unsplit real axis: at least keep the kink on a panel edge
        line.segments.push_back({0.0, omega.real(), RadialMapKind::linear});
        line.segments.push_back({omega.real(), lambda, RadialMapKind::linear});
        return line;
    }
    line.segments.push_back({0.0, lambda, RadialMapKind::linear});
    return line;
}

double truncation_decay_exponent(const QuadratureConfig& cfg) {
    return std::log(100.0 / std::min(cfg.rel_tol, 0.1)) + 8.0;
}

double truncation_radius(Complex omega, double d, const QuadratureConfig& cfg) {
    if (cfg.k_truncation_policy == TruncationPolicy::fixed) return cfg.fixed_lambda;
    if (!(d > 0.0)) throw std::domain_error("automatic k truncation needs a positive decay distance");
    const double kappa = truncation_decay_exponent(cfg) / d;
    const double w2 = (omega * omega).real();
    return std::sqrt(kappa * kappa + std::max(w2, 0.0));
}

int angular_nodes(double band_limit) {
    const double b = std::max(band_limit, 0.0);
    return std::max(16, int(std::ceil(b + 8.0 * std::cbrt(b) + 12.0)));
}

IntegralResult integrate_k4(const K4Integrand& f, const K4Domain& domain, const QuadratureConfig& cfg) {
    auto pair = [&](const RadialNode& a, const RadialNode& b) -> Complex {
        auto sum = [&](int n) {
            Complex s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += f(a.k, 2 * pi * i / n, b.k, 2 * pi * j / n);
            return s * (2 * pi / n) * (2 * pi / n);
        };
        int n = 16;
        Complex s = sum(n);
        while (n < 1024) {
            Complex s2 = sum(2 * n);
            n *= 2;
            bool ok = std::abs(s2 - s) <= std::max(cfg.abs_tol, 0.01 * cfg.rel_tol * std::abs(s2));
            s = s2;
            if (ok) break;
        }
        return s;
    };
    return integrate_radial_pair<Complex>(pair, domain.outer, domain.inner, cfg);
}

IntegralResultT<double> integrate_xi(const std::function<double(double)>& integrand, const AtomModel& atom,
                                     const QuadratureConfig& cfg) {
    auto g = [&](double xi, const QuadPlan*, QuadPlan*) {
        IntegralResultT<double> r;
        r.value = integrand(xi);
        r.evaluations = 1;
        return r;
    };
    return integrate_xi_nested<double>(g, atom.omega_A, cfg);
}

}  // namespace lithoqed
