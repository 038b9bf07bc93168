#pragma once

#include "lithoqed/config.hpp"

#include <ostream>
#include <vector>

namespace lithoqed {

struct ResultRecord {
    Vec3 position = Vec3::Zero();
    double value = 0.0;       // natural units
    double normalized = 0.0;  // per the scan's normalization
    double error = 0.0;       // estimate on value
    bool converged = true;
};

struct ScanResult {
    std::vector<ResultRecord> records;  // grid order
    double wall_seconds = 0.0;
    int threads = 1;
    bool all_converged() const;
};

ResultRecord evaluate_point(const RunConfig& cfg, const Vec3& position);

// Points are handed out to `threads` workers; the output order never depends on scheduling.
ScanResult run_scan(const RunConfig& cfg, int threads = 1);

inline constexpr const char* csv_header = "x,y,z,value,normalized,err,converged";
void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);

// Config echo (re-ingestible by parse_config_json), version, timing; records only when asked.
void write_json(std::ostream& out, const RunConfig& cfg, const ScanResult& result, bool with_records);

}  // namespace lithoqed
