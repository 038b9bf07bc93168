#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lithoqed {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // measured deviations against their thresholds
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0: no runtime limit
};

// Sizes of the individual checks; `full` matches the acceptance thresholds.
struct ValidationPlan {
    int curve_points = 100;
    int kernel_samples = 100;
    std::vector<int> riemann_cells = {5, 10, 20, 40};
    int reciprocity_pairs = 50;
    int gradient_positions = 20;
    bool grating = true;
    int threads = 1;

    static ValidationPlan quick();
    static ValidationPlan full();
};

CheckResult check_free_space_rate();
CheckResult check_mirror_limits(int curve_points);
CheckResult check_kernel_catalogue(int samples);
CheckResult check_born_oracle(const std::vector<int>& cells, int threads);
CheckResult check_cp_reference();
CheckResult check_gradient_consistency(int positions);
CheckResult check_grating_phenomenology(std::ostream* log = nullptr);
CheckResult check_linearity();
CheckResult check_reciprocity(int pairs);

// Runs the plan, printing one line per check as it finishes.
std::vector<CheckResult> run_validation(const ValidationPlan& plan, std::ostream& out);

std::string format_check(const CheckResult& r);

}  // namespace lithoqed
