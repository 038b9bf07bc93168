// Acceptance suite: one PASS/FAIL line per criterion, full-size checks.
// Usage: acceptance [criterion ...]   (default: all, 1 to 9)
#include "lithoqed/validation.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <thread>

using namespace lithoqed;

int main(int argc, char** argv) {
    ValidationPlan plan = ValidationPlan::full();
    plan.threads = std::max(1u, std::thread::hardware_concurrency());
    const std::function<CheckResult()> checks[] = {
        [] { return check_free_space_rate(); },
        [&] { return check_mirror_limits(plan.curve_points); },
        [&] { return check_kernel_catalogue(plan.kernel_samples); },
        [&] { return check_born_oracle(plan.riemann_cells, plan.threads); },
        [] { return check_cp_reference(); },
        [&] { return check_gradient_consistency(plan.gradient_positions); },
        [] { return check_grating_phenomenology(&std::cout); },
        [] { return check_linearity(); },
        [&] { return check_reciprocity(plan.reciprocity_pairs); },
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > 9) {
            std::cerr << "acceptance: criteria are numbered 1 to 9, got '" << argv[i] << "'\n";
            return 2;
        }
        only.insert(id);
    }
    int failed = 0;
    for (int id = 1; id <= 9; ++id) {
        if (!only.empty() && !only.count(id)) continue;
        const CheckResult r = checks[id - 1]();
        std::cout << "CRITERION " << id << ' ' << (r.passed ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail
                  << " (" << r.seconds << " s)" << std::endl;
        failed += !r.passed;
    }
    std::cout << (failed ? "ACCEPTANCE FAIL: " : "ACCEPTANCE PASS: ") << failed << " criterion(s) failed" << std::endl;
    return failed ? 1 : 0;
}
