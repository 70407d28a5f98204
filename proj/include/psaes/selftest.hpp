#pragma once

#include <string>
#include <vector>

namespace psaes
{
    struct SelftestCheck
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct SelftestReport
    {
        std::vector<SelftestCheck> checks;

        std::size_t passed() const;
        std::size_t failed() const;
    };

    /// Sphere convergence of plain CMA-ES, the order-statistic approximation
    /// against sampled order statistics, the rho ratio under a decreasing
    /// location, and structural invariants over a short PSA run.
    SelftestReport run_selftest();
}
