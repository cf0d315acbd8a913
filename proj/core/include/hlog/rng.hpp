#pragma once

#include <cstdint>
#include <string>

namespace hlog {

/// Deterministic 64-bit generator (splitmix64 core).  Hand-rolled so that
/// streams are reproducible independently of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi_inclusive) {
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi_inclusive - lo + 1));
    }

    /// Standard normal via Box-Muller (always consumes two uniforms).
    double normal();

    /// Derive an independent child stream, e.g. per work item.
    Rng fork(std::uint64_t salt) const;

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable 64-bit hash of a label, for seed derivation.
std::uint64_t hash_label(const std::string& label);

} // namespace hlog
