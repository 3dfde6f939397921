#pragma once

#include <cmath>
#include <cstdint>

namespace ctlab {

// Counter-based generator: a 64-bit seed plus (stream, counter) words pushed
// through the splitmix64 finalizer. Identical draws regardless of thread
// schedule as long as (seed, stream, counter) triples are identical.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), counter_(0) {}

    std::uint64_t next_u64() { return mix(seed_, stream_, counter_++); }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // integer in [0, m)
    std::uint64_t next_below(std::uint64_t m) { return next_u64() % m; }

    double normal() {
        // Box-Muller; consumes two draws.
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * counter;
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

}  // namespace ctlab
