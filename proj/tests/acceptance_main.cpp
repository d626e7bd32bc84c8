// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <iostream>

#include "smlab/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    auto results = smlab::run_acceptance(only, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
