#pragma once

#include "conjoint/complex_matrix.hpp"

namespace conjoint {

/// Which factor of H_A (x) H_B a partial trace removes.
enum class Subsystem { A, B };

// Composite index convention: (i, k) in H_A (x) H_B maps to i * dimB + k,
// i.e. the A index is major. tensor_product and partial_trace both use it.

/// Matrix product. Throws DimensionError when a.cols != b.rows.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);

/// Kronecker product a (x) b.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

Complex trace(const ComplexMatrix& m);

/// Traces out `over` from an operator on C^dimA (x) C^dimB.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over);

/// max |(m^dagger m - I)_ij| <= tol.eps(). Non-square input is never unitary.
bool is_unitary(const ComplexMatrix& m, Tolerance tol = {});

/// The residual tested by is_unitary.
double unitarity_residual(const ComplexMatrix& m);

/// Euclidean norm of a column.
double vector_norm(const ComplexMatrix& v);

/// <u|v> = sum conj(u_i) v_i for two columns of equal length.
Complex inner(const ComplexMatrix& u, const ComplexMatrix& v);

/// |v><v| for a column v.
ComplexMatrix projector(const ComplexMatrix& v);

/// Serial reference kernels. Same contracts as the parallel versions above;
/// kept simple so tests and benchmarks have a fixed point of comparison.
namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over);

}  // namespace serial

}  // namespace conjoint
