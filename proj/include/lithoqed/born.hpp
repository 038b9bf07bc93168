#pragma once

#include "lithoqed/geometry.hpp"
#include "lithoqed/green.hpp"
#include "lithoqed/kernels.hpp"
#include "lithoqed/quadrature.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>

namespace lithoqed {

using EntryMask = std::array<bool, 9>;  // row-major (i, j)
inline constexpr EntryMask all_entries{true, true, true, true, true, true, true, true, true};
inline constexpr EntryMask diagonal_entries{true, false, false, false, true, false, false, false, true};

// Angular (phi, phi') rule: automatic uses the Bessel reduction at coincident points and the
// trapezoid rule otherwise.
enum class AngularRule { automatic, trapezoid };

struct BornRequest {
    BornVariant variant = BornVariant::scattering;
    EntryMask mask = all_entries;
    AngularRule angular = AngularRule::automatic;
    // Resolve only Im of the (k, k') integral J (Delta W = de J); the real part is dropped. Error
    // control then ignores Re J, which dominates near the deposition on the real axis.
    bool imag_only = false;
};

// Frozen quadrature tree plus the angular band-limit radii it was built with.
struct BornPlan {
    QuadPlan quad;
    std::vector<double> radius;
    std::vector<double> radius_prime;
    bool empty() const { return quad.empty(); }
};

// Angular projections depend only on (k, k') and the geometry; reusable across imaginary frequencies.
class MomentCache {
public:
    using Moments = std::array<Complex, angular_factor_count * angular_factor_count>;
    const Moments* find(int group, double k, double kp) const;
    void insert(int group, double k, double kp, const Moments& m);
    std::size_t size() const { return map_.size(); }
    std::size_t hits = 0;

private:
    struct Key {
        std::uint64_t a, b;
        int g;
        bool operator==(const Key&) const = default;
    };
    struct Hash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::uint64_t>()(k.a * 0x9E3779B97F4A7C15ull ^ (k.b + 0x632BE59BD9B4E019ull)) ^ k.g;
        }
    };
    std::unordered_map<Key, Moments, Hash> map_;
};

// First-order Born correction Delta W(r, r', omega) of the deposition, by the analytic
// s-integration (kernels x structure factors) and nested (k, k', phi, phi') quadrature.
// Tolerances apply to Delta W / de, so the adaptive path never depends on the contrast.
IntegralResultT<Matrix3c> born_correction(const HalfSpaceEnvironment& env, const DepositionGeometry& geometry,
                                          const Vec3& r, const Vec3& r_prime, Complex omega,
                                          const QuadratureConfig& cfg, const BornRequest& request = {},
                                          const BornPlan* frozen = nullptr, BornPlan* record = nullptr,
                                          MomentCache* cache = nullptr);

// Band-limit radii used for the angular rules (max in-plane distance to each z-group's footprint).
void born_angular_radii(const DepositionGeometry& geometry, const Vec3& r, const Vec3& r_prime,
                        std::vector<double>& radius, std::vector<double>& radius_prime);

}  // namespace lithoqed
