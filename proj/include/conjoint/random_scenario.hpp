#pragma once

#include "conjoint/experiment.hpp"
#include "conjoint/rng.hpp"

namespace conjoint {

/// Column with i.i.d. complex Gaussian entries, normalized.
ComplexMatrix random_unit_vector(std::size_t dim, RngStream& rng);

/// Gram-Schmidt orthonormalization of a complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t dim, RngStream& rng);

/// Random normalized alpha and random (generally non-orthogonal) chi_i.
Preparation random_preparation(std::size_t dim_a, std::size_t dim_b, RngStream& rng);

/// Orthonormal chi_i (requires dim_a <= dim_b).
Preparation random_orthonormal_preparation(std::size_t dim_a, std::size_t dim_b, RngStream& rng);

/// Random preparation, random V_B, standard basis_a, random basis_b.
Scenario random_local_scenario(std::size_t dim_a, std::size_t dim_b, RngStream& rng);

/// Random preparation, random U_AB and declared V_B, random bases on both sides.
Scenario random_joint_scenario(std::size_t dim_a, std::size_t dim_b, RngStream& rng);

}  // namespace conjoint
