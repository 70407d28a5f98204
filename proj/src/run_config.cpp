#include "psaes/run_config.hpp"
#include "psaes/benchmarks.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace psaes
{
    namespace
    {
        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return std::string(s.substr(b, e - b + 1));
        }

        double parse_double(std::string_view key, std::string_view v)
        {
            const std::string s(v);
            std::size_t used = 0;
            double x = 0.0;
            try
            {
                x = std::stod(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != s.size() || s.empty() || !std::isfinite(x))
                throw InvalidArgument(std::string(key) + ": expected a number, got '" + s + "'");
            return x;
        }

        std::uint64_t parse_uint(std::string_view key, std::string_view v)
        {
            std::uint64_t x = 0;
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc() || p != v.data() + v.size() || v.empty())
                throw InvalidArgument(std::string(key) + ": expected a nonnegative integer, got '" + std::string(v) +
                                      "'");
            return x;
        }

        bool parse_bool(std::string_view key, std::string_view v)
        {
            if (v == "true" || v == "1" || v == "on" || v == "yes")
                return true;
            if (v == "false" || v == "0" || v == "off" || v == "no")
                return false;
            throw InvalidArgument(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
        }

        std::string fmt(double x)
        {
            std::ostringstream os;
            os.precision(17);
            os << x;
            return os.str();
        }
    }

    std::string to_string(Algorithm a)
    {
        switch (a)
        {
        case Algorithm::CmaEs: return "cma-es";
        case Algorithm::PsaGeneral: return "psa-general";
        case Algorithm::PsaReformulated: return "psa-reformulated";
        case Algorithm::PsaNoCorrection: return "psa-no-correction";
        case Algorithm::PsaScaled: return "psa-scaled";
        }
        return "?";
    }

    std::string to_string(LambdaSchedule s)
    {
        switch (s)
        {
        case LambdaSchedule::Adaptive: return "adaptive";
        case LambdaSchedule::ForcedIncreasing: return "forced-increasing";
        case LambdaSchedule::ForcedDecreasing: return "forced-decreasing";
        case LambdaSchedule::Frozen: return "frozen";
        }
        return "?";
    }

    std::string to_string(MuProxyMode m)
    {
        return m == MuProxyMode::MeanOfMean ? "mean-of-m" : "f-of-m";
    }

    std::string to_string(FisherMetric f)
    {
        return f == FisherMetric::Distribution ? "distribution" : "shape";
    }

    Algorithm parse_algorithm(std::string_view s)
    {
        for (auto a : {Algorithm::CmaEs, Algorithm::PsaGeneral, Algorithm::PsaReformulated, Algorithm::PsaNoCorrection,
                       Algorithm::PsaScaled})
            if (s == to_string(a))
                return a;
        throw InvalidArgument("algorithm: unknown value '" + std::string(s) +
                              "' (cma-es, psa-general, psa-reformulated, psa-no-correction, psa-scaled)");
    }

    LambdaSchedule parse_schedule(std::string_view s)
    {
        for (auto v : {LambdaSchedule::Adaptive, LambdaSchedule::ForcedIncreasing, LambdaSchedule::ForcedDecreasing,
                       LambdaSchedule::Frozen})
            if (s == to_string(v))
                return v;
        throw InvalidArgument("schedule: unknown value '" + std::string(s) +
                              "' (adaptive, forced-increasing, forced-decreasing, frozen)");
    }

    MuProxyMode parse_mu_proxy(std::string_view s)
    {
        if (s == "mean-of-m")
            return MuProxyMode::MeanOfMean;
        if (s == "f-of-m")
            return MuProxyMode::FOfMean;
        throw InvalidArgument("mu-proxy: unknown value '" + std::string(s) + "' (mean-of-m, f-of-m)");
    }

    FisherMetric parse_fisher(std::string_view s)
    {
        if (s == "distribution")
            return FisherMetric::Distribution;
        if (s == "shape")
            return FisherMetric::Shape;
        throw InvalidArgument("fisher: unknown value '" + std::string(s) + "' (distribution, shape)");
    }

    const std::vector<std::string> &RunConfig::keys()
    {
        static const std::vector<std::string> k = {
            "function", "dim",      "seed",        "algorithm", "kappa", "L",           "max-gens", "tol",
            "schedule", "mc-samples", "mu-proxy", "sigma-scale", "fisher", "clamp", "time-budget", "run-id"};
        return k;
    }

    void RunConfig::set(std::string_view key, std::string_view raw)
    {
        const std::string value = trim(raw);
        if (key == "function")
        {
            make_objective(value, std::max<std::size_t>(dim, 2)); // name check only
            function = value;
        }
        else if (key == "dim")
        {
            const auto d = parse_uint(key, value);
            if (d < 1 || d > 1000)
                throw InvalidArgument("dim: must be in 1..1000, got " + value);
            dim = static_cast<std::size_t>(d);
        }
        else if (key == "seed")
            seed = parse_uint(key, value);
        else if (key == "algorithm")
            algorithm = parse_algorithm(value);
        else if (key == "kappa")
        {
            const double k = parse_double(key, value);
            if (!(k >= 0.0 && k <= 1.0))
                throw InvalidArgument("kappa: must be in (0, 1], got " + value);
            kappa = k;
        }
        else if (key == "L")
        {
            const double l = parse_double(key, value);
            if (!(l >= 1.0))
                throw InvalidArgument("L: must be >= 1, got " + value);
            L = l;
        }
        else if (key == "max-gens")
        {
            const auto g = parse_uint(key, value);
            if (g < 1)
                throw InvalidArgument("max-gens: must be >= 1");
            max_gens = static_cast<std::size_t>(g);
        }
        else if (key == "tol")
        {
            const double t = parse_double(key, value);
            if (!(t > 0.0))
                throw InvalidArgument("tol: must be > 0, got " + value);
            tol = t;
        }
        else if (key == "schedule")
            schedule = parse_schedule(value);
        else if (key == "mc-samples")
        {
            const auto m = parse_uint(key, value);
            if (m < 1)
                throw InvalidArgument("mc-samples: must be >= 1");
            mc_samples = static_cast<std::size_t>(m);
        }
        else if (key == "mu-proxy")
            mu_proxy = parse_mu_proxy(value);
        else if (key == "sigma-scale")
            sigma_scale = parse_bool(key, value);
        else if (key == "fisher")
            fisher = parse_fisher(value);
        else if (key == "clamp")
            clamp = parse_bool(key, value);
        else if (key == "time-budget")
        {
            const double t = parse_double(key, value);
            if (t < 0.0)
                throw InvalidArgument("time-budget: must be >= 0");
            time_budget = t;
        }
        else if (key == "run-id")
        {
            if (value.find_first_of(",\n\"") != std::string::npos)
                throw InvalidArgument("run-id: must not contain commas, quotes or newlines");
            run_id = value;
        }
        else
            throw InvalidArgument("unknown config key '" + std::string(key) + "'");
    }

    void RunConfig::validate() const
    {
        make_objective(function, dim);
        if (algorithm != Algorithm::PsaScaled && !(kappa > 0.0))
            throw InvalidArgument("kappa: must be in (0, 1], got 0 (only psa-scaled accepts 0)");
        if (algorithm == Algorithm::CmaEs && schedule != LambdaSchedule::Adaptive &&
            schedule != LambdaSchedule::Frozen)
            throw InvalidArgument("schedule: cma-es keeps lambda fixed, forced schedules need a psa algorithm");
    }

    std::size_t default_max_gens(const std::string &function)
    {
        if (function == "schaffer")
            return 10;
        if (function == "sphere")
            return 250;
        return 20;
    }

    std::size_t RunConfig::effective_max_gens() const
    {
        return max_gens > 0 ? max_gens : default_max_gens(function);
    }

    std::string RunConfig::effective_run_id() const
    {
        if (!run_id.empty())
            return run_id;
        return function + "-" + to_string(algorithm) + "-s" + std::to_string(seed);
    }

    CorrectionConfig RunConfig::correction() const
    {
        CorrectionConfig c;
        c.kappa = kappa;
        c.L = L;
        c.mu_proxy_mode = mu_proxy;
        c.include_sigma_scale = sigma_scale;
        return c;
    }

    std::string RunConfig::to_text() const
    {
        std::ostringstream os;
        os << "function=" << function << "\n"
           << "dim=" << dim << "\n"
           << "seed=" << seed << "\n"
           << "algorithm=" << to_string(algorithm) << "\n"
           << "kappa=" << fmt(kappa) << "\n"
           << "L=" << fmt(L) << "\n"
           << "max-gens=" << effective_max_gens() << "\n"
           << "tol=" << fmt(tol) << "\n"
           << "schedule=" << to_string(schedule) << "\n"
           << "mc-samples=" << mc_samples << "\n"
           << "mu-proxy=" << to_string(mu_proxy) << "\n"
           << "sigma-scale=" << (sigma_scale ? "true" : "false") << "\n"
           << "fisher=" << to_string(fisher) << "\n"
           << "clamp=" << (clamp ? "true" : "false") << "\n"
           << "time-budget=" << fmt(time_budget) << "\n";
        if (!run_id.empty())
            os << "run-id=" << run_id << "\n";
        return os.str();
    }

    void apply_config_text(RunConfig &cfg, std::string_view text)
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos)
                nl = text.size();
            std::string line = trim(text.substr(pos, nl - pos));
            pos = nl + 1;
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line = trim(line.substr(0, hash));
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
}
