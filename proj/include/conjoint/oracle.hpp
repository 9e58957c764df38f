#pragma once

#include <cstdint>
#include <vector>

#include "conjoint/experiment.hpp"
#include "conjoint/probability.hpp"
#include "conjoint/rng.hpp"

namespace conjoint {

/// Counts of n draws from a joint table, laid out dim_a x dim_b.
struct SampleRun {
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<std::uint64_t> counts;

    [[nodiscard]] std::uint64_t operator()(std::size_t a, std::size_t b) const {
        return counts[a * dim_b + b];
    }
    /// counts / n as a JointTable.
    [[nodiscard]] JointTable frequencies() const;
};

/// Draws are split into this many fixed chunks, each with its own substream,
/// so results do not depend on the number of worker threads.
inline constexpr std::size_t kSampleChunks = 64;

/// Brute-force p(a,b) = Tr(P_ab U|psi><psi|U^dagger) with P_ab = |a><a| (x) |b><b|,
/// built from full composite-space matrices. Independent of the engine's
/// amplitude path.
JointTable enumerate_joint(const Scenario& s, Tolerance tol = {});

/// n inverse-CDF draws from `table`. Throws std::invalid_argument when n == 0.
SampleRun sample_joint(const JointTable& table, std::uint64_t n, std::uint64_t seed);

/// n draws from the enumerated table of `s`.
SampleRun sample_joint(const Scenario& s, std::uint64_t n, std::uint64_t seed, Tolerance tol = {});

/// 0.5 * sum_ab |p - q|.
double tv_distance(const JointTable& p, const JointTable& q);

namespace serial {

/// Single-threaded reference for the chunked sampler; bit-identical counts.
SampleRun sample_joint(const JointTable& table, std::uint64_t n, std::uint64_t seed);

}  // namespace serial

}  // namespace conjoint
