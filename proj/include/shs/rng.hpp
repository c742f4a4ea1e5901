#pragma once

// Deterministic randomness helpers. Every random choice in the library is
// driven by an explicit 64-bit seed; stream seeds are derived from a single
// root seed so one number pins a whole experiment.

#include <cstdint>
#include <random>
#include <vector>

namespace shs {

// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 with platform-independent draw helpers (the std distribution
// objects are implementation-defined, so bounded draws are done by hand).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, bound), bound > 0; rejection sampling avoids modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    int next_int(int bound) { return static_cast<int>(next_below(static_cast<std::uint64_t>(bound))); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [-limit, limit].
    double next_symmetric(double limit) { return (2.0 * next_real() - 1.0) * limit; }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates; deterministic given the Rng state.
template <typename T>
void shuffle_in_place(std::vector<T>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[rng.next_below(i)]);
    }
}

}  // namespace shs
