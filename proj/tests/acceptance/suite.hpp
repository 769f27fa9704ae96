#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "driftdet/model.hpp"

namespace driftdet::verify {

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    ModelParams params;
    bool full = true;            ///< false: closed forms, density, generator, reproducibility on a coarse solve
    int threads = 0;
    std::ostream* progress = nullptr;  ///< each line is also written here as soon as it is known
};

std::vector<CheckResult> run_suite(const SuiteOptions& opt);

std::string format_line(const CheckResult& r);

}  // namespace driftdet::verify
