#pragma once

#include "lithoqed/core.hpp"

namespace lithoqed {

struct AtomModel {
    double omega_A = 1.0;
    double dipole = 1.0;           // |d|
    Vec3 direction = Vec3::UnitZ();  // ignored when isotropic
    bool isotropic = false;

    static AtomModel oriented(double omega_A, Vec3 dir, double d = 1.0);
    static AtomModel isotropic_atom(double omega_A, double d = 1.0);
    void validate() const;
};

// alpha(i xi) = (2/3) w |d|^2 / (w^2 + xi^2)
double polarisability(const AtomModel& atom, double xi);

}  // namespace lithoqed
