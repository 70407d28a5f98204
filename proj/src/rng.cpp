#include "psaes/rng.hpp"

namespace psaes::rng
{
    std::uint64_t splitmix64(std::uint64_t &state)
    {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t generation, Stream tag, std::uint64_t index)
    {
        // Chain the four words through splitmix so that neighbouring inputs
        // land far apart.
        std::uint64_t state = seed;
        std::uint64_t h = splitmix64(state);
        state = h ^ generation;
        h = splitmix64(state);
        state = h ^ static_cast<std::uint64_t>(tag);
        h = splitmix64(state);
        state = h ^ index;
        return splitmix64(state);
    }

    Engine make_engine(std::uint64_t seed, std::uint64_t generation, Stream tag, std::uint64_t index)
    {
        std::uint64_t s = derive_seed(seed, generation, tag, index);
        std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        return Engine(seq);
    }
}
