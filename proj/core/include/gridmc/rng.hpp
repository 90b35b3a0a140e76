#pragma once

#include <cmath>
#include <cstdint>

namespace gridmc {

// splitmix64; used to derive independent sub-stream seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

// xoshiro256** with hand-rolled distributions. The standard <random>
// distributions are not bit-stable across library implementations, and the
// run contract requires byte-identical output for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        for (auto& w : state_) {
            seed = mix_seed(seed);
            w = seed;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, bound), bound >= 1
    std::uint64_t uniform_int(std::uint64_t bound) {
        // rejection sampling against the unbiased threshold
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // exponential inter-arrival gap with the given rate (events/sec)
    double exponential(double rate) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace gridmc
