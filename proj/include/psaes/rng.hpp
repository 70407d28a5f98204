#pragma once

#include <cstdint>
#include <random>

namespace psaes::rng
{
    using Engine = std::mt19937_64;

    /// Purpose tags keep substreams of one run disjoint.
    enum class Stream : std::uint64_t
    {
        Init = 0x1,
        Sampling = 0x2,
        NeutralUpdate = 0x3,
    };

    std::uint64_t splitmix64(std::uint64_t &state);

    /// Seed for the substream identified by (run seed, generation, purpose, index).
    /// Pure function of its arguments, so substreams can be created in any order
    /// or on any thread.
    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t generation, Stream tag, std::uint64_t index = 0);

    Engine make_engine(std::uint64_t seed, std::uint64_t generation, Stream tag, std::uint64_t index = 0);
}
