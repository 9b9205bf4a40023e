#ifndef CPMC_RNG_HPP
#define CPMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace cpmc {

// mt19937_64 core with hand-rolled variate conversions. The engine's output
// sequence is pinned by the standard, and we avoid std::*_distribution whose
// sequences are implementation-defined, so a (seed, config, data) triple
// reproduces bit-identical runs on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform_pos()); }

    // Unbiased integer in [0, m), m >= 1; rejection on the top range.
    std::uint64_t uniform_int(std::uint64_t m) {
        if (m < 2) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % m;
    }

    // Standard normal via Box-Muller (one value per call, no cached spare).
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        return r * std::cos(6.283185307179586 * uniform());
    }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = uniform_int(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace cpmc

#endif
