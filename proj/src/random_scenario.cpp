#include "conjoint/random_scenario.hpp"

#include <stdexcept>

#include "conjoint/linalg.hpp"

namespace conjoint {

namespace {

Complex gaussian(RngStream& rng) {
    const double re = rng.next_normal();
    const double im = rng.next_normal();
    return {re, im};
}

ComplexMatrix gaussian_column(std::size_t dim, RngStream& rng) {
    ComplexMatrix v(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = gaussian(rng);
    }
    return v;
}

}  // namespace

ComplexMatrix random_unit_vector(std::size_t dim, RngStream& rng) {
    ComplexMatrix v = gaussian_column(dim, rng);
    return v * Complex(1.0 / vector_norm(v));
}

ComplexMatrix random_unitary(std::size_t dim, RngStream& rng) {
    // Modified Gram-Schmidt, run twice per column for orthogonality at 1e-15.
    std::vector<ComplexMatrix> columns;
    columns.reserve(dim);
    while (columns.size() < dim) {
        ComplexMatrix v = gaussian_column(dim, rng);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : columns) {
                v -= inner(q, v) * q;
            }
        }
        const double norm = vector_norm(v);
        if (norm < 1e-8) {
            continue;
        }
        columns.push_back(v * Complex(1.0 / norm));
    }
    ComplexMatrix u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
            u(r, c) = columns[c][r];
        }
    }
    return u;
}

Preparation random_preparation(std::size_t dim_a, std::size_t dim_b, RngStream& rng) {
    Preparation prep{dim_a, dim_b, {}, {}};
    const ComplexMatrix alpha = random_unit_vector(dim_a, rng);
    prep.amplitudes.assign(alpha.entries().begin(), alpha.entries().end());
    for (std::size_t i = 0; i < dim_a; ++i) {
        prep.conditional_states.push_back(random_unit_vector(dim_b, rng));
    }
    return prep;
}

Preparation random_orthonormal_preparation(std::size_t dim_a, std::size_t dim_b, RngStream& rng) {
    if (dim_a > dim_b) {
        throw std::invalid_argument("orthonormal conditional states need dim_a <= dim_b");
    }
    Preparation prep{dim_a, dim_b, {}, {}};
    const ComplexMatrix alpha = random_unit_vector(dim_a, rng);
    prep.amplitudes.assign(alpha.entries().begin(), alpha.entries().end());
    const MeasurementBasis frame = MeasurementBasis::from_columns(random_unitary(dim_b, rng));
    for (std::size_t i = 0; i < dim_a; ++i) {
        prep.conditional_states.push_back(frame.vectors[i]);
    }
    return prep;
}

Scenario random_local_scenario(std::size_t dim_a, std::size_t dim_b, RngStream& rng) {
    Scenario s;
    s.preparation = random_preparation(dim_a, dim_b, rng);
    s.evolution = Evolution::local(random_unitary(dim_b, rng));
    s.basis_a = MeasurementBasis::standard(dim_a);
    s.basis_b = MeasurementBasis::from_columns(random_unitary(dim_b, rng));
    return s;
}

Scenario random_joint_scenario(std::size_t dim_a, std::size_t dim_b, RngStream& rng) {
    Scenario s;
    s.preparation = random_preparation(dim_a, dim_b, rng);
    s.evolution = Evolution::joint(random_unitary(dim_a * dim_b, rng));
    s.declared_local = random_unitary(dim_b, rng);
    s.basis_a = MeasurementBasis::from_columns(random_unitary(dim_a, rng));
    s.basis_b = MeasurementBasis::from_columns(random_unitary(dim_b, rng));
    return s;
}

}  // namespace conjoint
