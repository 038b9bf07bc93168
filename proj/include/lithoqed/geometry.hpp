#pragma once

#include "lithoqed/core.hpp"
#include "lithoqed/kinematics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lithoqed {

struct Interval {
    double lo;
    double hi;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool operator==(const Interval&) const = default;
};

struct DepositionBox {
    Interval x, y, z;

    DepositionBox(Interval x, Interval y, Interval z);
    double volume() const { return x.width() * y.width() * z.width(); }
    Vec3 centroid() const { return {x.mid(), y.mid(), z.mid()}; }
    // closed box: surface points count as inside
    bool contains(const Vec3& p) const;
};

struct DepositionGeometry {
    std::vector<DepositionBox> boxes;
    MaterialModel material = MaterialModel::vacuum();  // eps_dep; contrast is eps_dep - 1

    Complex delta_eps(Complex omega) const;
    double volume() const;
    bool contains(const Vec3& p) const;
    double top() const;
    void validate() const;
    // |delta eps(omega_A)| >= 1 warnings (the Born truncation needs a small contrast)
    std::vector<std::string> warnings(double omega_A) const;
};

struct GratingSpec {
    int N = 5;
    double w = 1.0, h = 1.0, L = 5.0;
    std::optional<double> x0_override;

    double x0() const { return x0_override ? *x0_override : -w * (N - 0.75); }
};

DepositionGeometry build_cube(double a, const MaterialModel& material = MaterialModel::vacuum());
DepositionGeometry build_grating(const GratingSpec& spec, const MaterialModel& material = MaterialModel::vacuum());

// Exact sinc threshold |beta|(b-a) below which the Taylor form is used.
inline constexpr double sinc_threshold = 1e-4;

// int_a^b exp(i (c0 + beta s)) ds, finite across beta = 0.
Complex phase_integral(Complex c0, Complex beta, double a, double b);

// int_box exp(i[(k - k').s_par + (k_z + k_z') s_z]) d^3 s
Complex structure_factor(const DepositionBox& box, const WaveContext& ctx, const WaveContext& ctx_prime);

}  // namespace lithoqed
