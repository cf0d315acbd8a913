#include "hlog/rng.hpp"

#include <cmath>

namespace hlog {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Rng Rng::fork(std::uint64_t salt) const {
    Rng copy = *this;
    std::uint64_t s = copy.next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x85ebca6bULL);
    return Rng(s);
}

std::uint64_t hash_label(const std::string& label) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace hlog
