#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lithoqed {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Matrix3c = Eigen::Matrix3cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

inline const char* version() { return "1.0.0"; }

// Raised when a quadrature budget runs out and the caller asked for strict results.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_; }

private:
    double estimate_;
    double error_;
};

}  // namespace lithoqed
