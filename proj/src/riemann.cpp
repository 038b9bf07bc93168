// Brute-force Born s-integral. Uses only numerically integrated half-space tensors and the box list;
// no kernels, structure factors or Born machinery.
#include "lithoqed/green.hpp"
#include "lithoqed/geometry.hpp"
#include "lithoqed/oracle.hpp"

#include <thread>
#include <vector>

namespace lithoqed {

RiemannResult born_correction_riemann(const HalfSpaceEnvironment& env, const DepositionGeometry& geo, const Vec3& r,
                                      const Vec3& rp, Complex w, const OracleConfig& cfg,
                                      const QuadratureConfig& qcfg, bool scattering_only, Contraction contraction) {
    if (cfg.cells_per_axis < 2) throw std::domain_error("oracle needs at least 2 cells per axis");
    if (geo.contains(r) || geo.contains(rp)) throw std::domain_error("oracle field points must lie outside the deposition");
    RiemannResult out;
    if (geo.boxes.empty()) return out;
    const Complex de = permittivity(geo.material, w) - 1.0;
    if (de == 0.0) return out;
    const int n = cfg.cells_per_axis;
    struct Cell {
        Vec3 s;
        double dv;
    };
    std::vector<Cell> cells;
    for (const auto& b : geo.boxes) {
        const double dx = b.x.width() / n, dy = b.y.width() / n, dz = b.z.width() / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l)
                    cells.push_back({Vec3(b.x.lo + (i + 0.5) * dx, b.y.lo + (j + 0.5) * dy, b.z.lo + (l + 0.5) * dz),
                                     dx * dy * dz});
    }
    std::vector<Matrix3c> contrib(cells.size());
    std::vector<char> ok(cells.size(), 1);
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t c = begin; c < cells.size(); c += step) {
            const Vec3& s = cells[c].s;
            GreenTensor a = halfspace_gf(env, r, s, w, GreenPart::whole, qcfg);
            GreenTensor b = halfspace_gf(env, s, rp, w, GreenPart::whole, qcfg);
            Matrix3c prod;
            if (contraction == Contraction::entrywise) {
                prod = a.entries.cwiseProduct(b.entries);
            } else {
                prod = a.entries * b.entries;
            }
            if (scattering_only) {
                Matrix3c va = vacuum_gf(r, s, w).entries, vb = vacuum_gf(s, rp, w).entries;
                prod -= contraction == Contraction::entrywise ? Matrix3c(va.cwiseProduct(vb)) : Matrix3c(va * vb);
            }
            contrib[c] = prod * cells[c].dv;
            ok[c] = a.converged && b.converged;
        }
    };
    const int nt = std::max(1, cfg.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work, std::size_t(t), std::size_t(nt));
    work(0, std::size_t(nt));
    for (auto& t : pool) t.join();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        out.value += contrib[c];
        out.converged = out.converged && ok[c];
    }
    out.value *= w * w * de;
    return out;
}

}  // namespace lithoqed
