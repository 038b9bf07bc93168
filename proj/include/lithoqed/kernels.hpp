#pragma once

#include "lithoqed/core.hpp"
#include "lithoqed/green.hpp"
#include "lithoqed/kinematics.hpp"

#include <array>

namespace lithoqed {

// VAC is the R-independent term of the bracket.
enum class KernelType { TE, TM, TETE, TMTM, TETM, VAC };
enum class Ordering { greater, lesser };  // r_z > s_z or r_z < s_z

inline constexpr KernelType all_kernel_types[] = {KernelType::TE,   KernelType::TM,   KernelType::TETE,
                                                  KernelType::TMTM, KernelType::TETM, KernelType::VAC};

const char* to_string(KernelType t);

// Cartesian wave vector as used by the kernels: k_x = k sin(phi), k_y = k cos(phi).
struct KVec {
    double kx = 0.0;
    double ky = 0.0;
    Complex kz;
    double k2() const { return kx * kx + ky * ky; }
    static KVec from(const WaveContext& c) { return {c.kx(), c.ky(), c.k_z}; }
    KVec swapped() const { return {ky, kx, kz}; }
};

// Polynomial parts of K = unprimed e^{...} + primed e^{...}; exponentials stripped.
// TETE, TMTM and VAC carry everything in `unprimed`.
struct KernelHalves {
    Complex unprimed;
    Complex primed;
};

// Each half is a short sum coef * f_a(k_x, k_y) * f_b(k_x', k_y') over the angular factors below,
// with coefficients depending only on |k|, k_z, |k'|, k_z' and omega.
enum class AngularFactor { one, x_, y_, xx_, yy_, xy_ };
inline constexpr int angular_factor_count = 6;
double angular_factor(AngularFactor f, double kx, double ky);

struct SeparableTerm {
    Complex coef;
    AngularFactor a, b;
};
struct SeparableHalves {
    std::array<SeparableTerm, 4> unprimed{}, primed{};
    int n_unprimed = 0, n_primed = 0;
};
SeparableHalves separable_halves(KernelType tau, int i, int j, Ordering ord, double k, Complex kz, double kp,
                                 Complex pz, Complex omega);

KernelHalves kernel_halves(KernelType tau, int i, int j, Ordering ord, const KVec& k, const KVec& kp, Complex omega);

// Full matrix element including its exponential. For the greater ordering the phases use s_z,
// for the lesser ordering r_z (unprimed half) and r_z' (primed half).
Complex kernel_entry(KernelType tau, int i, int j, Ordering ord, const WaveContext& ctx, const WaveContext& ctx_prime,
                     double s_z, double r_z, double r_z_prime);

// P = -de / (64 pi^4 w^4 k^2 k'^2 k_z k_z') exp(i[k.(r-s) + k'.(s-r') + k_z(r_z+s_z) + k_z'(r_z'+s_z)])
Complex born_prefactor(const WaveContext& ctx, const WaveContext& ctx_prime, const Vec3& r, const Vec3& r_prime,
                       const Vec3& s, Complex delta_eps);

enum class BornVariant { whole, scattering };

// w^2 P [VAC + K^TETM R_TE R_TM + sum_sigma (K^sigma R_sigma + K^sigmasigma R_sigma^2)] at one s.
Matrix3c born_integrand(const HalfSpaceEnvironment& env, const Vec3& s, const Vec3& r, const Vec3& r_prime,
                        const WaveContext& ctx, const WaveContext& ctx_prime, Complex delta_eps,
                        BornVariant variant = BornVariant::scattering);

}  // namespace lithoqed
