// Verification gate runner: executes every criterion of the suite,
// prints one pass/fail line per criterion plus the detailed record list,
// and exits nonzero if anything failed. Tolerances live in the library
// (src/acceptance.cpp), pinned in code.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "srlab/lab.hpp"

int main(int argc, char** argv) {
    using namespace srlab::lab;
    bool smoke = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--smoke") smoke = true;

    VerdictBundle b = verify_all(smoke ? Suite::smoke : Suite::full, 1, "acceptance-out");

    static const std::pair<const char*, const char*> labels[] = {
        {"c00", "prerequisites: solved geodesic pool"},
        {"c01", "square-root comparison inequality on random data"},
        {"c02", "primal/dual zero-gap identity and small-N oracles"},
        {"c03", "step-control modulus profile (exponent, constant, seminorm)"},
        {"c04", "endpoint deviation orders (quadratic projected, linear raw)"},
        {"c05", "pointwise first-variation bound never exceeded"},
        {"c06", "anisotropic distance scaling (horizontal and transverse)"},
        {"c07", "solved-control regularity and the invariance sentinel"},
        {"c08", "coefficient decay, weighted-sum verdict flip, truncation rate"},
        {"c09", "exponent arithmetic and admissible ranges"},
        {"c10", "constant-speed energy identity and deviation lower bound"},
        {"c11", "interpolational estimate: grid stability and bounded sweep"},
    };

    std::map<std::string, std::pair<int, int>> tally;  // prefix -> (pass, fail)
    for (const auto& c : b.checks) {
        std::string key = c.name.size() >= 3 ? c.name.substr(0, 3) : c.name;
        auto& t = tally[key];
        (c.pass ? t.first : t.second)++;
    }

    bool all = true;
    for (const auto& [key, label] : labels) {
        auto it = tally.find(key);
        if (it == tally.end()) {
            std::printf("[%s] FAIL  %s (no checks ran)\n", key, label);
            all = false;
            continue;
        }
        bool ok = it->second.second == 0;
        std::printf("[%s] %s  %s (%d check%s)\n", key, ok ? "PASS" : "FAIL", label,
                    it->second.first + it->second.second,
                    it->second.first + it->second.second == 1 ? "" : "s");
        if (!ok) all = false;
    }

    std::printf("\n--- record details ---\n%s", bundle_summary(b).c_str());
    std::printf("bundle written to acceptance-out/bundle.json\n");
    return all && b.all_pass() ? 0 : 1;
}
