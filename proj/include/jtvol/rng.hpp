#pragma once

#include <cstdint>

namespace jtvol {

// xoshiro256** with splitmix64 seeding.
//
// Substream rule (fixed, part of the output contract): substream k of
// seed s is seeded by the splitmix64 chain starting at
// s XOR (k+1)*0x9E3779B97F4A7C15, taking four successive outputs as the
// initial state.  Every concurrent unit of work (draw or chain) owns one
// substream, so batches are bit-identical however the work is scheduled.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
    Rng(std::uint64_t seed, std::uint64_t substream);

    std::uint64_t next_u64();

    // [0,1) with 53 random bits
    double uniform01();

    // standard normal via the Marsaglia polar method
    double normal();

    // chi-square with even dof 2m, exactly as a sum of exponentials
    double chisq_even(int m);

private:
    std::uint64_t s_[4];
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace jtvol
