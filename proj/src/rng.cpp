#include "conjoint/rng.hpp"

#include <cmath>
#include <numbers>

namespace conjoint {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream RngStream::substream(std::uint64_t seed, std::uint64_t index) {
    return RngStream(splitmix64(seed ^ splitmix64(index + 1)));
}

double RngStream::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - next_unit();
    const double u2 = next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace conjoint
