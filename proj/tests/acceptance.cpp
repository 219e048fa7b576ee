// Acceptance gate: runs the nine-criterion suite and prints one line per
// criterion. Exit code 0 only when every criterion passes.

#include <cstdio>

#include <planarmap/verification.hpp>

int main() {
    const auto results = planarmap::run_acceptance_suite();
    for (const auto& r : results) {
        std::printf("criterion %d %-24s %s  %7.2fs  %s\n", r.index, r.name.c_str(),
                    r.passed ? "pass" : "FAIL", r.seconds, r.detail.c_str());
    }
    const bool ok = planarmap::all_passed(results);
    std::printf("%s\n", ok ? "acceptance: all nine criteria passed"
                           : "acceptance: at least one criterion FAILED");
    return ok ? 0 : 1;
}
