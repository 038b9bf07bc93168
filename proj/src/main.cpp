#include "lithoqed/config.hpp"
#include "lithoqed/presets.hpp"
#include "lithoqed/scan.hpp"
#include "lithoqed/validation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace lithoqed;

namespace {

constexpr int exit_ok = 0, exit_error = 1, exit_partial = 2;

int default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string sidecar_path(const std::string& out) {
    std::filesystem::path p(out);
    if (p.extension() == ".json") return out + ".json";
    p.replace_extension(".json");
    return p.string();
}

int cmd_scan(const std::string& config_path, int threads, std::string out, const std::string& format) {
    const RunConfig cfg = load_config(config_path);
    check_scan_points(cfg);
    if (out.empty()) out = std::filesystem::path(config_path).stem().string() + (format == "json" ? ".json" : ".csv");
    const ScanResult res = run_scan(cfg, threads);

    auto emit = [&](std::ostream& os) {
        if (format == "json")
            write_json(os, cfg, res, true);
        else
            write_csv(os, res.records);
    };
    if (out == "-") {
        emit(std::cout);
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        emit(f);
        if (format == "csv") {
            std::ofstream s(sidecar_path(out));
            if (!s) throw std::runtime_error("cannot write " + sidecar_path(out));
            write_json(s, cfg, res, false);
        }
    }
    std::size_t bad = 0;
    for (const auto& r : res.records) bad += !r.converged;
    std::cerr << "lithoqed: " << res.records.size() << " points, " << bad << " not converged, " << res.wall_seconds
              << " s" << (out == "-" ? "" : ", wrote " + out) << '\n';
    return bad == 0 ? exit_ok : exit_partial;
}

int cmd_validate(const std::string& level, int threads) {
    ValidationPlan plan = level == "full" ? ValidationPlan::full() : ValidationPlan::quick();
    plan.threads = threads;
    const auto results = run_validation(plan, std::cout);
    for (const auto& r : results)
        if (!r.passed) return exit_error;
    return exit_ok;
}

int cmd_presets_list() {
    for (const auto& p : presets()) std::cout << p.name << "  " << p.summary << '\n';
    return exit_ok;
}

int cmd_presets_emit(const std::string& name, const std::string& out) {
    const Preset* p = find_preset(name);
    if (!p) {
        std::cerr << "lithoqed: unknown preset '" << name << "' (see 'lithoqed presets list')\n";
        return exit_error;
    }
    if (out.empty() || out == "-") {
        std::cout << p->text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << p->text;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Born-corrected half-space QED: decay rates and Casimir-Polder potentials near depositions"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    std::string config_path, out, format = "csv", level = "quick", preset_name;
    int threads = default_threads();

    auto* scan = app.add_subcommand("scan", "evaluate the configured grid and write CSV (plus a JSON sidecar) or JSON");
    scan->add_option("config", config_path, "INI config or JSON sidecar")->required();
    scan->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    scan->add_option("--out", out, "output path, '-' for stdout (default: <config stem>.csv|.json)");
    scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* validate = app.add_subcommand("validate", "run the oracle checks and print PASS/FAIL per invariant");
    validate->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--threads", threads, "threads for the Riemann sums")->check(CLI::PositiveNumber);

    auto* pre = app.add_subcommand("presets", "configs reproducing the figures");
    pre->require_subcommand(1);
    auto* list = pre->add_subcommand("list", "names and descriptions");
    auto* emit = pre->add_subcommand("emit", "print a preset config");
    emit->add_option("name", preset_name)->required();
    emit->add_option("--out", out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    try {
        if (*scan) return cmd_scan(config_path, threads, out, format);
        if (*validate) return cmd_validate(level, threads);
        if (*list) return cmd_presets_list();
        if (*emit) return cmd_presets_emit(preset_name, out);
    } catch (const ConfigError& e) {
        std::cerr << "lithoqed: " << e.what() << '\n';
        return exit_error;
    } catch (const std::exception& e) {
        std::cerr << "lithoqed: error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
