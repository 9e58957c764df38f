#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace conjoint {

/// Deterministic random stream.
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform doubles are built by hand from the top 53 bits
/// ((x >> 11) * 2^-53) instead of std::uniform_real_distribution, whose
/// algorithm is implementation-defined. Together this makes every sample
/// sequence bit-identical across platforms and standard libraries.
///
/// Substreams: stream k of seed s is seeded with
/// splitmix64(s ^ splitmix64(k + 1)).
class RngStream {
public:
    static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-substreams/v1";

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Standard normal via Box-Muller (both outputs used).
    double next_normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace conjoint
