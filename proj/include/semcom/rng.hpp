#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace semcom {

// splitmix64 finalizer; used to decorrelate user-facing seeds and to derive
// per-session / per-hop engine seeds from a master seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(base ^ 0x2545F4914F6CDD1DULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return mix64(h ^ c);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64{mix64(seed)};
}

// Bounded draw without std::uniform_int_distribution: the standard leaves
// distribution output implementation-defined, the raw engine stream does not.
inline std::uint64_t next_below(std::mt19937_64& eng, std::uint64_t n) {
    return n ? eng() % n : 0;
}

inline double next_unit(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Seeded standard-normal source (Box-Muller), deterministic per seed.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : eng_(make_engine(seed)) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_unit(eng_);
        double u2 = next_unit(eng_);
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace semcom
