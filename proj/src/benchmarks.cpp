#include "psaes/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace psaes
{
    double rastrigin(const Vector &x)
    {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            s += x(i) * x(i) + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * x(i)));
        return s;
    }

    double schaffer(const Vector &x)
    {
        if (x.size() < 2)
            throw InvalidArgument("schaffer needs n >= 2");
        double s = 0.0;
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
        {
            const double r = x(i) * x(i) + x(i + 1) * x(i + 1);
            const double t = std::sin(50.0 * std::pow(r, 0.1));
            s += std::pow(r, 0.25) * (t * t + 1.0);
        }
        return s;
    }

    double sphere(const Vector &x)
    {
        return x.squaredNorm();
    }

    ObjectiveFunction make_objective(const std::string &name, std::size_t n)
    {
        if (n == 0)
            throw InvalidArgument("dimension must be at least 1");

        ObjectiveFunction f;
        f.name = name;
        f.dimension = n;
        f.optimizer = Vector::Zero(static_cast<Eigen::Index>(n));
        f.optimum_value = 0.0;
        if (name == "rastrigin")
        {
            f.domain_lo = -10.0, f.domain_hi = 10.0;
            f.init_lo = 1.0, f.init_hi = 5.0;
            f.evaluate = rastrigin;
        }
        else if (name == "schaffer")
        {
            if (n < 2)
                throw InvalidArgument("schaffer needs dimension >= 2");
            f.domain_lo = -100.0, f.domain_hi = 100.0;
            f.init_lo = 10.0, f.init_hi = 100.0;
            f.evaluate = schaffer;
        }
        else if (name == "sphere")
        {
            f.domain_lo = -5.0, f.domain_hi = 5.0;
            f.init_lo = 1.0, f.init_hi = 5.0;
            f.evaluate = sphere;
        }
        else
        {
            throw InvalidArgument("unknown function '" + name + "' (expected rastrigin, schaffer or sphere)");
        }
        return f;
    }

    std::vector<std::string> objective_names()
    {
        return {"rastrigin", "schaffer", "sphere"};
    }

    InitialPoint init_state(const ObjectiveFunction &f, rng::Engine &engine)
    {
        std::uniform_real_distribution<double> u(f.init_lo, f.init_hi);
        InitialPoint p;
        p.m0.resize(static_cast<Eigen::Index>(f.dimension));
        for (Eigen::Index i = 0; i < p.m0.size(); ++i)
            p.m0(i) = u(engine);
        p.sigma0 = (f.init_hi - f.init_lo) / 2.0;
        return p;
    }
}
