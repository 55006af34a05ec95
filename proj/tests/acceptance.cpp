// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <iostream>

#include "ddeq/acceptance.hpp"

int main()
{
    using namespace ddeq::acceptance;
    bool ok = true;
    double total = 0;
    for (const auto& r : run(Level::Full)) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << " ("
                  << detail::fmt(r.seconds) << " s)\n";
        for (const auto& d : r.details) std::cout << "      " << d << "\n";
        ok = ok && r.passed;
        total += r.seconds;
    }
    std::cout << (ok ? "all criteria passed" : "some criteria failed") << " in " << detail::fmt(total) << " s\n";
    return ok ? 0 : 1;
}
