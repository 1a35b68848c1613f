// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
// Optional argument: worker count (default: hardware concurrency).

#include <iostream>
#include <string>
#include <thread>

#include "burgers/acceptance.hpp"

int main(int argc, char** argv) {
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (argc > 1) jobs = std::max(1, std::stoi(argv[1]));
    const auto results = burgers::run_acceptance(std::cout, jobs);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << '/' << results.size() << " criteria passed\n";
    return failed ? 1 : 0;
}
