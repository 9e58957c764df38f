#include "conjoint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "conjoint/linalg.hpp"

namespace conjoint {

namespace {

std::uint64_t chunk_size(std::uint64_t n, std::size_t chunk) {
    return n / kSampleChunks + (chunk < n % kSampleChunks ? 1 : 0);
}

struct Cdf {
    std::vector<double> cumulative;
    std::size_t last_nonzero = 0;

    explicit Cdf(const JointTable& table) : cumulative(table.values().size()) {
        double running = 0.0;
        for (std::size_t k = 0; k < cumulative.size(); ++k) {
            running += table.values()[k];
            cumulative[k] = running;
            if (table.values()[k] > 0.0) {
                last_nonzero = k;
            }
        }
    }

    [[nodiscard]] std::size_t draw(double u) const {
        const double target = u * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        const auto index = static_cast<std::size_t>(it - cumulative.begin());
        // Round-off can leave target at or above the final sum.
        return std::min(index, last_nonzero);
    }
};

void draw_chunk(const Cdf& cdf, std::uint64_t seed, std::size_t chunk, std::uint64_t n,
                std::vector<std::uint64_t>& counts) {
    RngStream rng = RngStream::substream(seed, chunk);
    for (std::uint64_t t = 0; t < chunk_size(n, chunk); ++t) {
        ++counts[cdf.draw(rng.next_unit())];
    }
}

SampleRun empty_run(const JointTable& table, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_joint: sample count must be at least 1");
    }
    return SampleRun{seed, n, table.dim_a(), table.dim_b(),
                     std::vector<std::uint64_t>(table.values().size(), 0)};
}

}  // namespace

JointTable SampleRun::frequencies() const {
    std::vector<double> p(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) {
        p[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    }
    return JointTable(dim_a, dim_b, std::move(p));
}

JointTable enumerate_joint(const Scenario& s, Tolerance tol) {
    if (auto report = validate_scenario(s, tol); !report.ok()) {
        throw ValidationError(std::move(report));
    }
    const Preparation& prep = s.preparation;
    const std::size_t dim_a = prep.dim_a;
    const std::size_t dim_b = prep.dim_b;

    ComplexMatrix psi(dim_a * dim_b, 1);
    for (std::size_t i = 0; i < dim_a; ++i) {
        psi += prep.amplitudes[i] *
               tensor_product(ComplexMatrix::basis_vector(dim_a, i), prep.conditional_states[i]);
    }
    const ComplexMatrix u = s.evolution.kind == EvolutionKind::Local
                                ? tensor_product(ComplexMatrix::identity(dim_a), s.evolution.op)
                                : s.evolution.op;
    const ComplexMatrix rho = matmul(matmul(u, projector(psi)), adjoint(u));

    std::vector<double> p(dim_a * dim_b);
    const auto cells = static_cast<std::int64_t>(p.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t cell = 0; cell < cells; ++cell) {
        const std::size_t a = static_cast<std::size_t>(cell) / dim_b;
        const std::size_t b = static_cast<std::size_t>(cell) % dim_b;
        const ComplexMatrix p_ab =
            tensor_product(projector(s.basis_a.vectors[a]), projector(s.basis_b.vectors[b]));
        p[static_cast<std::size_t>(cell)] = trace(matmul(p_ab, rho)).real();
    }
    try {
        return JointTable(dim_a, dim_b, std::move(p), tol);
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("enumerate_joint produced an invalid table: ") + e.what());
    }
}

SampleRun sample_joint(const JointTable& table, std::uint64_t n, std::uint64_t seed) {
    SampleRun run = empty_run(table, n, seed);
    const Cdf cdf(table);
    std::vector<std::vector<std::uint64_t>> partial(kSampleChunks,
                                                    std::vector<std::uint64_t>(run.counts.size()));
    const auto chunks = static_cast<std::int64_t>(kSampleChunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        draw_chunk(cdf, seed, static_cast<std::size_t>(c), n, partial[static_cast<std::size_t>(c)]);
    }
    for (const auto& chunk_counts : partial) {
        for (std::size_t k = 0; k < run.counts.size(); ++k) {
            run.counts[k] += chunk_counts[k];
        }
    }
    return run;
}

SampleRun sample_joint(const Scenario& s, std::uint64_t n, std::uint64_t seed, Tolerance tol) {
    if (n == 0) {
        throw std::invalid_argument("sample_joint: sample count must be at least 1");
    }
    return sample_joint(enumerate_joint(s, tol), n, seed);
}

double tv_distance(const JointTable& p, const JointTable& q) {
    if (p.dim_a() != q.dim_a() || p.dim_b() != q.dim_b()) {
        throw DimensionError("tv_distance: " + std::to_string(p.dim_a()) + "x" +
                             std::to_string(p.dim_b()) + " vs " + std::to_string(q.dim_a()) + "x" +
                             std::to_string(q.dim_b()));
    }
    double sum = 0.0;
    for (std::size_t a = 0; a < p.dim_a(); ++a) {
        for (std::size_t b = 0; b < p.dim_b(); ++b) {
            sum += std::abs(p(a, b) - q(a, b));
        }
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

namespace serial {

SampleRun sample_joint(const JointTable& table, std::uint64_t n, std::uint64_t seed) {
    SampleRun run = empty_run(table, n, seed);
    const Cdf cdf(table);
    for (std::size_t c = 0; c < kSampleChunks; ++c) {
        draw_chunk(cdf, seed, c, n, run.counts);
    }
    return run;
}

}  // namespace serial

}  // namespace conjoint
