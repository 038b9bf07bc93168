#pragma once

#include "lithoqed/core.hpp"

#include <vector>

namespace lithoqed {

enum class Axis { real, imaginary };

struct Frequency {
    double value;
    Axis axis;

    Frequency(double v, Axis a = Axis::real);
    static Frequency real(double w) { return {w, Axis::real}; }
    static Frequency imaginary(double xi) { return {xi, Axis::imaginary}; }

    // omega as a complex number: value or i*value
    Complex omega() const { return axis == Axis::real ? Complex(value, 0.0) : Complex(0.0, value); }
};

struct Oscillator {
    double strength;   // S_j
    double frequency;  // omega_j
    double damping;    // gamma_j
};

enum class MaterialKind { vacuum, drude_lorentz, constant, perfect_mirror };

struct MaterialModel {
    MaterialKind kind = MaterialKind::vacuum;
    double epsilon = 1.0;  // constant kind
    std::vector<Oscillator> oscillators;  // drude-lorentz kind

    static MaterialModel vacuum() { return {}; }
    static MaterialModel constant(double eps);
    static MaterialModel perfect_mirror();
    static MaterialModel drude_lorentz(std::vector<Oscillator> osc);
};

// eps(omega) = 1 + sum_j S_j / (w_j^2 - omega^2 - i g_j omega), valid for complex omega.
Complex permittivity(const MaterialModel& m, Complex omega);
Complex permittivity(const MaterialModel& m, const Frequency& f);

// Branch with Im >= 0 (and Re >= 0 when Im == 0).
Complex kz(Complex omega, double k_par);
Complex kz(const Frequency& f, double k_par);
Complex kz_medium(Complex eps, Complex omega, double k_par);

struct WaveContext {
    double k_par = 0.0;
    double phi = 0.0;
    double chi = 1.0;  // cos phi
    double eta = 0.0;  // sin phi
    Complex omega;
    Complex k_z;

    WaveContext() = default;
    WaveContext(Complex omega, double k_par, double phi);
    WaveContext(const Frequency& f, double k_par, double phi) : WaveContext(f.omega(), k_par, phi) {}

    double kx() const { return k_par * eta; }
    double ky() const { return k_par * chi; }
    // same context with k_x and k_y exchanged
    WaveContext swapped_xy() const;
};

enum class Polarization { TE, TM };

Complex fresnel(Polarization sigma, const MaterialModel& m, Complex omega, double k_par);
Complex fresnel(Polarization sigma, const MaterialModel& m, const WaveContext& ctx);

}  // namespace lithoqed
