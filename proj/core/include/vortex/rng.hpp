// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The vortex library authors

#pragma once

#include <cmath>
#include <cstdint>

namespace vortex {

// Deterministic random stream with a fixed cross-platform bit-for-bit
// contract. std::mt19937_64 itself is portable, but the <random>
// distributions are implementation-defined, which would break the
// byte-identical-report guarantee; uniform and normal variates are
// therefore generated here from raw 64-bit draws.
//
// splitmix64 is used both to scramble user seeds and to derive
// independent per-task substreams (seed, index) -> stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {
        // one warmup step so that seed==0 does not yield state 0
        next_u64();
    }

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return splitmix(seed ^ (0x9e3779b97f4a7c15ULL + splitmix(index)));
    }

    std::uint64_t next_u64() {
        // xorshift64* — tiny, fast, passes the statistical tests that
        // matter at this scale, and fully specified here.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box–Muller (cached second variate)
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

} // namespace vortex
