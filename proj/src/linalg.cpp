#include "conjoint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace conjoint {

namespace {

void require_square(const ComplexMatrix& m, const char* op) {
    if (!m.is_square()) {
        throw DimensionError(std::string(op) + " needs a square matrix, got " + shape_string(m));
    }
}

void require_composite(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
    if (dim_a == 0 || dim_b == 0) {
        throw DimensionError("partial_trace: subsystem dimensions must be positive");
    }
    if (!m.is_square() || m.rows() != dim_a * dim_b) {
        throw DimensionError("partial_trace: expected a square matrix of side " +
                             std::to_string(dim_a * dim_b) + " (" + std::to_string(dim_a) + "*" +
                             std::to_string(dim_b) + "), got " + shape_string(m));
    }
}

void require_column(const ComplexMatrix& v, const char* op) {
    if (!v.is_column()) {
        throw DimensionError(std::string(op) + " needs a column vector, got " + shape_string(v));
    }
}

// Signed loop counters keep the OpenMP pragmas portable to older runtimes.
using index_t = std::int64_t;

}  // namespace

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + shape_string(a) + " by " +
                             shape_string(b));
    }
    const index_t n = static_cast<index_t>(a.rows());
    const std::size_t inner_dim = a.cols();
    const std::size_t m = b.cols();
    ComplexMatrix out(a.rows(), m);
#pragma omp parallel for schedule(static) if (n * static_cast<index_t>(m * inner_dim) > 32768)
    for (index_t i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        // i-k-j order streams through rows of b.
        Complex* out_row = &out(row, 0);
        for (std::size_t k = 0; k < inner_dim; ++k) {
            const double ar = a(row, k).real();
            const double ai = a(row, k).imag();
            if (ar == 0.0 && ai == 0.0) {
                continue;
            }
            const Complex* b_row = &b(k, 0);
            // Plain real arithmetic; std::complex operator* takes the slow C99 inf/NaN path.
            for (std::size_t j = 0; j < m; ++j) {
                const double br = b_row[j].real();
                const double bi = b_row[j].imag();
                out_row[j] += Complex{ar * br - ai * bi, ar * bi + ai * br};
            }
        }
    }
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = std::conj(m(i, j));
        }
    }
    return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t br = b.rows();
    const std::size_t bc = b.cols();
    ComplexMatrix out(a.rows() * br, a.cols() * bc);
    const index_t out_rows = static_cast<index_t>(out.rows());
#pragma omp parallel for schedule(static) if (out.size() > 16384)
    for (index_t r = 0; r < out_rows; ++r) {
        const auto row = static_cast<std::size_t>(r);
        const std::size_t i = row / br;
        const std::size_t k = row % br;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (std::size_t l = 0; l < bc; ++l) {
                out(row, j * bc + l) = aij * b(k, l);
            }
        }
    }
    return out;
}

Complex trace(const ComplexMatrix& m) {
    require_square(m, "trace");
    Complex sum{};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        sum += m(i, i);
    }
    return sum;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over) {
    require_composite(m, dim_a, dim_b);
    const std::size_t keep = over == Subsystem::A ? dim_b : dim_a;
    const std::size_t drop = over == Subsystem::A ? dim_a : dim_b;
    ComplexMatrix out(keep, keep);
    const index_t cells = static_cast<index_t>(keep * keep);
#pragma omp parallel for schedule(static) if (cells * static_cast<index_t>(drop) > 16384)
    for (index_t cell = 0; cell < cells; ++cell) {
        const std::size_t r = static_cast<std::size_t>(cell) / keep;
        const std::size_t c = static_cast<std::size_t>(cell) % keep;
        Complex sum{};
        for (std::size_t t = 0; t < drop; ++t) {
            sum += over == Subsystem::A ? m(t * dim_b + r, t * dim_b + c)
                                        : m(r * dim_b + t, c * dim_b + t);
        }
        out(r, c) = sum;
    }
    return out;
}

double unitarity_residual(const ComplexMatrix& m) {
    require_square(m, "unitarity_residual");
    return max_abs_diff(matmul(adjoint(m), m), ComplexMatrix::identity(m.rows()));
}

bool is_unitary(const ComplexMatrix& m, Tolerance tol) {
    if (!m.is_square()) {
        return false;
    }
    return unitarity_residual(m) <= tol.eps();
}

double vector_norm(const ComplexMatrix& v) {
    require_column(v, "vector_norm");
    double sum = 0.0;
    for (const Complex& z : v.entries()) {
        sum += std::norm(z);
    }
    return std::sqrt(sum);
}

Complex inner(const ComplexMatrix& u, const ComplexMatrix& v) {
    require_column(u, "inner");
    require_column(v, "inner");
    if (u.rows() != v.rows()) {
        throw DimensionError("inner: length mismatch " + shape_string(u) + " vs " +
                             shape_string(v));
    }
    Complex sum{};
    for (std::size_t i = 0; i < u.rows(); ++i) {
        sum += std::conj(u[i]) * v[i];
    }
    return sum;
}

ComplexMatrix projector(const ComplexMatrix& v) {
    require_column(v, "projector");
    return matmul(v, adjoint(v));
}

namespace serial {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + shape_string(a) + " by " +
                             shape_string(b));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex sum{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                sum += a(i, k) * b(k, j);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over) {
    require_composite(m, dim_a, dim_b);
    if (over == Subsystem::A) {
        ComplexMatrix out(dim_b, dim_b);
        for (std::size_t i = 0; i < dim_a; ++i) {
            for (std::size_t k = 0; k < dim_b; ++k) {
                for (std::size_t l = 0; l < dim_b; ++l) {
                    out(k, l) += m(i * dim_b + k, i * dim_b + l);
                }
            }
        }
        return out;
    }
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i) {
        for (std::size_t j = 0; j < dim_a; ++j) {
            for (std::size_t k = 0; k < dim_b; ++k) {
                out(i, j) += m(i * dim_b + k, j * dim_b + k);
            }
        }
    }
    return out;
}

}  // namespace serial

}  // namespace conjoint
