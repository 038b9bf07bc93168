#pragma once

#include "lithoqed/atom.hpp"
#include "lithoqed/geometry.hpp"
#include "lithoqed/green.hpp"
#include "lithoqed/quadrature.hpp"

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace lithoqed {

// Bad configuration; line is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, const std::string& msg);
    int line() const { return line_; }
    const std::string& source() const { return source_; }

private:
    std::string source_;
    int line_;
};

enum class Quantity { decay_rate, cp_potential, cp_force };
enum class Normalization { raw, bare_halfspace, free_space, U0, F0 };

const char* to_string(Quantity q);
const char* to_string(Normalization n);

struct GridAxis {
    int component = 0;  // 0, 1, 2 for x, y, z
    double start = 0.0, stop = 0.0;
    int count = 1;
    double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

struct ScanSpec {
    Quantity quantity = Quantity::decay_rate;
    Normalization normalization = Normalization::raw;
    Vec3 origin = Vec3(0, 0, 1);
    std::vector<GridAxis> axes;  // one or two; the first varies slowest
    Vec3 force_direction = Vec3::UnitX();

    std::size_t size() const;
    // grid order: row-major over axes
    std::vector<Vec3> points() const;
};

// One key as written, kept for echoing and round trips.
struct ConfigEntry {
    std::string section, key, value;
    int line = 0;
};

struct RunConfig {
    AtomModel atom;
    HalfSpaceEnvironment env;
    DepositionGeometry geometry;
    QuadratureConfig quadrature;
    ScanSpec scan;
    std::vector<ConfigEntry> entries;
    std::string source;
};

RunConfig parse_config_ini(std::istream& in, const std::string& source = "<input>");
// The "config" object of a JSON sidecar (or a bare object of sections).
RunConfig parse_config_json(const std::string& text, const std::string& source = "<input>");
// Picks the format from the first non-blank character.
RunConfig load_config(const std::string& path);

// Canonical INI text of the entries, in the order written.
std::string to_ini(const std::vector<ConfigEntry>& entries);

// Grid points inside the deposition or at z <= 0, named in the message.
void check_scan_points(const RunConfig& cfg);

}  // namespace lithoqed
