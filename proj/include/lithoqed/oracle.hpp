#pragma once

#include "lithoqed/geometry.hpp"
#include "lithoqed/green.hpp"
#include "lithoqed/kernels.hpp"

#include <random>

namespace lithoqed {

struct OracleConfig {
    int cells_per_axis = 10;
    double fd_step = 1.2;  // in units of the inverse largest wave number
    unsigned seed = 1;
    int threads = 1;
};

// Random arguments for a kernel check at fixed ordering.
struct KernelSample {
    WaveContext ctx, ctx_prime;
    Vec3 r, s, r_prime;
};
KernelSample random_kernel_sample(Ordering ord, std::mt19937_64& rng);

struct KernelCheckResult {
    double max_deviation = 0.0;  // relative, absolute where the oracle entry vanishes
    int worst_i = -1, worst_j = -1;
    Matrix3c oracle = Matrix3c::Zero();
    Matrix3c kernel = Matrix3c::Zero();
};

// Applies the TE/TM differential operators by central finite differences (Richardson-extrapolated)
// to the plane-wave factors of the two propagators and compares with kernel_entry for all (i, j).
KernelCheckResult kernel_operator_check(KernelType tau, Ordering ord, const KernelSample& sample,
                                        const OracleConfig& cfg);

enum class Contraction { entrywise, matrix };

// Midpoint-rule s-integral of w^2 de W(r,s) o W(s,r') with numerically integrated half-space tensors.
// The scattering variant subtracts the vacuum-vacuum product.
struct RiemannResult {
    Matrix3c value = Matrix3c::Zero();
    bool converged = true;
};
RiemannResult born_correction_riemann(const HalfSpaceEnvironment& env, const DepositionGeometry& geometry,
                                      const Vec3& r, const Vec3& r_prime, Complex omega, const OracleConfig& cfg,
                                      const QuadratureConfig& qcfg = {}, bool scattering_only = true,
                                      Contraction contraction = Contraction::entrywise);

}  // namespace lithoqed
