#pragma once

#include "lithoqed/core.hpp"
#include "lithoqed/kinematics.hpp"
#include "lithoqed/quadrature.hpp"

#include <utility>

namespace lithoqed {

enum class GreenPart { whole, scattering, homogeneous };

struct GreenTensor {
    Matrix3c entries = Matrix3c::Zero();
    Vec3 r = Vec3::Zero();
    Vec3 r_prime = Vec3::Zero();
    Complex omega;
    GreenPart part = GreenPart::whole;
    double error = 0.0;
    bool converged = true;
};

struct HalfSpaceEnvironment {
    MaterialModel substrate;
};

// How the R-free part of the whole half-space tensor is obtained.
enum class FreePart { closed_form, quadrature };

// W = (I + grad grad / w^2) e^{i w R} / (4 pi R)
GreenTensor vacuum_gf(const Vec3& r, const Vec3& r_prime, Complex omega);
inline GreenTensor vacuum_gf(const Vec3& r, const Vec3& r_prime, const Frequency& f) {
    return vacuum_gf(r, r_prime, f.omega());
}

// Im W^vac(r, r) by k-quadrature of the Sommerfeld integrand (propagating band only contributes).
IntegralResultT<Matrix3c> vacuum_gf_im_coincident(Complex omega, const QuadratureConfig& cfg);

GreenTensor halfspace_gf(const HalfSpaceEnvironment& env, const Vec3& r, const Vec3& r_prime, Complex omega,
                         GreenPart part, const QuadratureConfig& cfg = {}, FreePart free = FreePart::closed_form);
inline GreenTensor halfspace_gf(const HalfSpaceEnvironment& env, const Vec3& r, const Vec3& r_prime,
                                const Frequency& f, GreenPart part, const QuadratureConfig& cfg = {},
                                FreePart free = FreePart::closed_form) {
    return halfspace_gf(env, r, r_prime, f.omega(), part, cfg, free);
}

// Perfect-mirror closed forms (|d| = 1): {delta Gamma_par, delta Gamma_perp}
std::pair<double, double> halfspace_decay_closed_forms(double z, double omega_A);

}  // namespace lithoqed
