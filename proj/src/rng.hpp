#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace dglet::detail {

// mt19937_64 is fully specified by the standard; these helpers are
// hand-rolled because the std distributions are not, and seeded outputs
// must be byte-identical across toolchains.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform() { return (eng() >> 11) * 0x1.0p-53; } // [0, 1)

    std::uint64_t below(std::uint64_t n) { // unbiased [0, n)
        std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() / n * n;
        std::uint64_t r;
        do {
            r = eng();
        } while (r >= lim);
        return r % n;
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    double normal() { // Box-Muller, one value per two uniforms
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    template <class T>
    void shuffle(std::vector<T> &v) { // Fisher-Yates
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }
};

inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
    std::uint64_t x = h + 0x9e3779b97f4a7c15ULL * (v + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

} // namespace dglet::detail
