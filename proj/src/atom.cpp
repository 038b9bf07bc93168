#include "lithoqed/atom.hpp"

#include <cmath>

namespace lithoqed {

AtomModel AtomModel::oriented(double w, Vec3 dir, double d) {
    AtomModel a;
    a.omega_A = w;
    a.dipole = d;
    a.direction = dir;
    a.isotropic = false;
    a.validate();
    a.direction.normalize();
    return a;
}

AtomModel AtomModel::isotropic_atom(double w, double d) {
    AtomModel a;
    a.omega_A = w;
    a.dipole = d;
    a.isotropic = true;
    a.validate();
    return a;
}

void AtomModel::validate() const {
    if (!(omega_A > 0.0)) throw std::domain_error("atom transition frequency must be positive");
    if (!(dipole >= 0.0)) throw std::domain_error("dipole magnitude must be non-negative");
    if (!isotropic && !(direction.norm() > 0.0)) throw std::domain_error("dipole direction must be nonzero");
}

double polarisability(const AtomModel& atom, double xi) {
    if (xi < 0.0) throw std::domain_error("polarisability needs xi >= 0");
    const double w = atom.omega_A;
    return 2.0 / 3.0 * w * atom.dipole * atom.dipole / (w * w + xi * xi);
}

}  // namespace lithoqed
