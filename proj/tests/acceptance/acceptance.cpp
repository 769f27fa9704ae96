// Acceptance suite for the default instance (mu = 1, c = 2). One line per criterion.
#include <cstring>
#include <iostream>

#include "suite.hpp"

int main(int argc, char** argv) {
    driftdet::verify::SuiteOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opt.full = false;
    }
    opt.progress = &std::cout;
    const auto results = driftdet::verify::run_suite(opt);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (failed == 0 ? "all " : "") << results.size() - std::size_t(failed) << "/" << results.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
