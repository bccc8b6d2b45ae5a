// Standalone acceptance runner: executes the twelve-criterion suite and
// prints one pass/fail line per criterion.  Exit status 0 iff all pass.

#include "tsm/selftest.hpp"

#include <cstdio>

int main() {
    const auto results = tsm::run_acceptance(0);
    for (const auto& r : results)
        std::printf("[%s] criterion %2d: %s: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
    const bool all = tsm::all_passed(results);
    std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return all ? 0 : 1;
}
