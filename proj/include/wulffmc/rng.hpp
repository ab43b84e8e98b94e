#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wulffmc/vec.hpp"

namespace wulffmc {

// Seeded generator with hand-rolled draw helpers so that trajectories are
// reproducible bit-for-bit from the seed alone (std:: distributions are
// implementation-defined; these are not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection to avoid modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // standard normal, Marsaglia polar with cache
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    // uniform direction on S^{d-1}
    Vec unit_vector(int dim) {
        if (dim == 2) {
            const double a = uniform(0.0, 2.0 * M_PI);
            return {std::cos(a), std::sin(a), 0.0};
        }
        Vec g;
        double n2;
        do {
            g = {normal(), normal(), normal()};
            n2 = g.norm2();
        } while (n2 < 1e-24);
        return g / std::sqrt(n2);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic seed for stream `stream`, element `index`, from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(base ^ 0x8BADF00D5EEDull);
    h = splitmix64(h ^ splitmix64(stream));
    h = splitmix64(h ^ splitmix64(index));
    return h;
}

inline std::vector<std::uint64_t> derive_seeds(std::uint64_t base, std::uint64_t stream, std::size_t count) {
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = derive_seed(base, stream, i);
    return out;
}

}  // namespace wulffmc
