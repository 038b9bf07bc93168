#pragma once

#include "lithoqed/atom.hpp"
#include "lithoqed/born.hpp"
#include "lithoqed/geometry.hpp"
#include "lithoqed/green.hpp"

namespace lithoqed {

// Rates in units where Gamma_0 = w^3 |d|^2 / 3 pi.
struct DecayRateResult {
    double gamma_total = 0.0;
    double gamma_0 = 0.0;
    double delta_gamma_surface = 0.0;
    double delta_gamma_deposition = 0.0;
    Vec3 position = Vec3::Zero();
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;

    double bare_halfspace() const { return gamma_0 + delta_gamma_surface; }
};

struct CPResult {
    double u_total = 0.0;
    double u_halfspace = 0.0;
    double delta_u_deposition = 0.0;
    double u0_reference = 0.0;
    Vec3 position = Vec3::Zero();
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

struct ForceResult {
    double value = 0.0;  // -dU/dn
    double f0_reference = 0.0;
    double step = 0.0;
    double error = 0.0;  // Richardson correction size plus propagated potential errors
    bool converged = true;
};

double gamma0(const AtomModel& atom);
// Non-retarded perfect-mirror references at height z.
double u0_reference(const AtomModel& atom, double z);
double f0_reference(const AtomModel& atom, double z);

// d . M . d* for an oriented atom, |d|^2 Tr M / 3 for an isotropic one.
Complex dipole_contract(const AtomModel& atom, const Matrix3c& m);
// Entries of the Green tensor the contraction needs.
EntryMask dipole_mask(const AtomModel& atom);

// Gamma = 2 w^2 d . Im W . d*; tensor must be the scattering part at (r_A, r_A, w_A).
DecayRateResult decay_rate(const AtomModel& atom, const GreenTensor& scattering, bool gamma0_included = true);

DecayRateResult decay_rate_deposition(const AtomModel& atom, const HalfSpaceEnvironment& env,
                                      const DepositionGeometry& geometry, const Vec3& position,
                                      const QuadratureConfig& cfg = {});

// Frozen xi tree with one Born (k, k') tree per xi node, so that the potential is a smooth
// function of position (used for finite-difference forces).
struct CPPlan {
    QuadPlan xi;
    bool empty() const { return xi.empty(); }
};

// U = (1/2 pi) int dxi xi^2 alpha(i xi) Tr G(r, r, i xi); the trace becomes 3 n.G.n for oriented atoms.
CPResult cp_potential(const AtomModel& atom, const HalfSpaceEnvironment& env, const DepositionGeometry& geometry,
                      const Vec3& position, const QuadratureConfig& cfg = {}, const CPPlan* frozen = nullptr,
                      CPPlan* record = nullptr);

double distance_to_deposition(const DepositionGeometry& geometry, const Vec3& position);

// Step used by cp_force: a fraction of the clearance to the substrate and to every box face plane.
double force_step(const DepositionGeometry& geometry, const Vec3& position);

// F = -dU/dn by central differences with one Richardson step, on a plan frozen at `position`
// (recorded there unless one is passed in).
ForceResult cp_force(const AtomModel& atom, const HalfSpaceEnvironment& env, const DepositionGeometry& geometry,
                     const Vec3& position, const Vec3& direction, const QuadratureConfig& cfg = {},
                     const CPPlan* plan = nullptr);

}  // namespace lithoqed
