#pragma once

#include "psaes/rng.hpp"
#include "psaes/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace psaes
{
    double rastrigin(const Vector &x);
    double schaffer(const Vector &x);
    double sphere(const Vector &x);

    struct ObjectiveFunction
    {
        std::string name;
        std::size_t dimension = 0;
        double domain_lo = 0.0, domain_hi = 0.0;
        double init_lo = 0.0, init_hi = 0.0;
        double optimum_value = 0.0;
        Vector optimizer;
        std::function<double(const Vector &)> evaluate;
    };

    /// Known names: rastrigin, schaffer, sphere. Throws InvalidArgument otherwise.
    ObjectiveFunction make_objective(const std::string &name, std::size_t n);

    std::vector<std::string> objective_names();

    struct InitialPoint
    {
        Vector m0;
        double sigma0 = 0.0;
    };

    /// m0 uniform on the init interval per coordinate, sigma0 half its width.
    InitialPoint init_state(const ObjectiveFunction &f, rng::Engine &engine);
}
