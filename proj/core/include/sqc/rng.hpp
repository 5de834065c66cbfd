#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sqc {

/// mt19937_64 with hand-rolled uniform/normal draws so that generated
/// streams are identical across standard libraries and platforms (the
/// distribution classes in <random> are not portable).
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; draws two uniforms per call.
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    uint64_t next_u64() { return engine_(); }

    /// Uniform integer on [0, n) by rejection, bias-free.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            const uint64_t r = engine_();
            if (r >= threshold) {
                return r % n;
            }
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sqc
