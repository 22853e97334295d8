#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// The verification suite behind `rarita-kit verify`: every invariant of the
// library runs as a named check against counter-seeded random data. Checks
// are independent, draw from per-name random streams, and aggregate in name
// order, so reports are byte-identical for a fixed seed regardless of the
// worker pool size.

namespace rarita {

struct SuiteConfig {
    int samples_algebraic = 10000;
    int samples_geometric = 1000;
    double tol_exact = 1e-12;
    double tol_fd = 1e-8;
    uint64_t seed = 7;
    int threads = 0;  // 0 = hardware, capped by RARITA_KIT_THREADS
};

struct CheckResult {
    std::string name;
    std::string anchor;   // stable identifier of the property family
    double worst_error = 0;
    double tol = 0;       // tolerance the check ran with
    double default_tol = 0;
    int samples = 0;
    bool pass = false;
    std::string note;
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<CheckResult> checks;  // sorted by name
    bool all_pass = false;
};

/// All registered check names, sorted.
std::vector<std::string> suite_check_names();

SuiteReport run_suite(const SuiteConfig& cfg);

std::string suite_report_json(const SuiteReport& report);

}  // namespace rarita
