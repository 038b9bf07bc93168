#include "lithoqed/scan.hpp"

#include "lithoqed/observables.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

namespace lithoqed {

bool ScanResult::all_converged() const {
    for (const auto& r : records)
        if (!r.converged) return false;
    return true;
}

ResultRecord evaluate_point(const RunConfig& cfg, const Vec3& p) {
    ResultRecord rec;
    rec.position = p;
    const auto& s = cfg.scan;
    switch (s.quantity) {
        case Quantity::decay_rate: {
            auto d = decay_rate_deposition(cfg.atom, cfg.env, cfg.geometry, p, cfg.quadrature);
            rec.value = d.gamma_total;
            rec.error = d.error;
            rec.converged = d.converged;
            rec.normalized = s.normalization == Normalization::free_space       ? d.gamma_total / d.gamma_0
                             : s.normalization == Normalization::bare_halfspace ? d.gamma_total / d.bare_halfspace()
                                                                                : d.gamma_total;
            break;
        }
        case Quantity::cp_potential: {
            auto u = cp_potential(cfg.atom, cfg.env, cfg.geometry, p, cfg.quadrature);
            rec.value = u.u_total;
            rec.error = u.error;
            rec.converged = u.converged;
            rec.normalized = s.normalization == Normalization::U0               ? u.u_total / u.u0_reference
                             : s.normalization == Normalization::bare_halfspace ? u.u_total / u.u_halfspace
                                                                                : u.u_total;
            break;
        }
        case Quantity::cp_force: {
            auto f = cp_force(cfg.atom, cfg.env, cfg.geometry, p, s.force_direction, cfg.quadrature);
            rec.value = f.value;
            rec.error = f.error;
            rec.converged = f.converged;
            rec.normalized = s.normalization == Normalization::F0 ? f.value / f.f0_reference : f.value;
            break;
        }
    }
    return rec;
}

ScanResult run_scan(const RunConfig& cfg, int threads) {
    check_scan_points(cfg);
    const auto pts = cfg.scan.points();
    ScanResult out;
    out.records.resize(pts.size());
    out.threads = std::max(1, std::min<int>(threads, static_cast<int>(pts.size())));
    const auto t0 = std::chrono::steady_clock::now();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto work = [&] {
        for (std::size_t i; (i = next++) < pts.size();) {
            try {
                out.records[i] = evaluate_point(cfg, pts[i]);
            } catch (...) {
                std::lock_guard lk(m);
                if (!failure) failure = std::current_exception();
                next = pts.size();
            }
        }
    };
    if (out.threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < out.threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

namespace {
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
    out << csv_header << '\n';
    for (const auto& r : records)
        out << num(r.position.x()) << ',' << num(r.position.y()) << ',' << num(r.position.z()) << ',' << num(r.value)
            << ',' << num(r.normalized) << ',' << num(r.error) << ',' << (r.converged ? 1 : 0) << '\n';
}

void write_json(std::ostream& out, const RunConfig& cfg, const ScanResult& result, bool with_records) {
    nlohmann::ordered_json j;
    j["version"] = version();
    j["source"] = cfg.source;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& e : cfg.entries) c[e.section][e.key] = e.value;
    j["config"] = c;
    j["quantity"] = to_string(cfg.scan.quantity);
    j["normalization"] = to_string(cfg.scan.normalization);
    j["columns"] = {"x", "y", "z", "value", "normalized", "err", "converged"};
    j["points"] = result.records.size();
    std::size_t ok = 0;
    for (const auto& r : result.records) ok += r.converged;
    j["converged_points"] = ok;
    j["timing"] = {{"wall_seconds", result.wall_seconds}, {"threads", result.threads}};
    if (with_records) {
        auto& rows = j["records"] = nlohmann::ordered_json::array();
        for (const auto& r : result.records)
            rows.push_back({{"x", r.position.x()},
                            {"y", r.position.y()},
                            {"z", r.position.z()},
                            {"value", r.value},
                            {"normalized", r.normalized},
                            {"err", r.error},
                            {"converged", r.converged}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace lithoqed
