#pragma once

#include <cstdint>

#include "brinkhom/vec3.hpp"

namespace brinkhom {

/// Counter-based random generator. Every draw is a pure function of
/// (seed, stream, counter), so sub-streams are order-independent and runs
/// are reproducible regardless of evaluation order. The mixing function is
/// the SplitMix64 finalizer applied to the combined key.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t counter) const {
        return mix(mix(seed_ ^ mix(stream_)) ^ counter);
    }

    std::uint64_t next_u64() { return at(counter_++); }

    /// Uniform double in [0, 1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    Vec3 uniform_in_box(const Box& box) {
        return {uniform(box.lo.x, box.hi.x), uniform(box.lo.y, box.hi.y),
                uniform(box.lo.z, box.hi.z)};
    }

    /// Uniform direction on the unit sphere (rejection in the cube).
    Vec3 unit_vector() {
        for (;;) {
            Vec3 p{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
            double n2 = norm2(p);
            if (n2 > 1e-12 && n2 <= 1.0) return p / std::sqrt(n2);
        }
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

}  // namespace brinkhom
