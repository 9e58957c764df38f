#include "conjoint/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conjoint/linalg.hpp"

namespace conjoint {

namespace {

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void append(ValidationReport& into, ValidationReport from) {
    for (auto& v : from.violations) {
        into.violations.push_back(std::move(v));
    }
}

void check_dim(ValidationReport& report, std::size_t dim, const std::string& path) {
    if (dim == 0 || dim > kMaxSubsystemDim) {
        report.violations.push_back({path,
                                     "dimension must be in 1.." + std::to_string(kMaxSubsystemDim) +
                                         ", got " + std::to_string(dim),
                                     std::nullopt});
    }
}

void check_unitary(ValidationReport& report, const ComplexMatrix& m, std::size_t side,
                   Tolerance tol, const std::string& path) {
    if (m.rows() != side || m.cols() != side) {
        report.violations.push_back(
            {path, "expected " + std::to_string(side) + "x" + std::to_string(side) + " operator, got " +
                       shape_string(m),
             std::nullopt});
        return;
    }
    if (!m.all_finite()) {
        report.violations.push_back({path, "operator has non-finite entries", std::nullopt});
        return;
    }
    const double residual = unitarity_residual(m);
    if (residual > tol.eps()) {
        report.violations.push_back({path, "operator is not unitary (max |U'U - I|)", residual});
    }
}

}  // namespace

MeasurementBasis MeasurementBasis::standard(std::size_t dim) {
    MeasurementBasis basis{dim, {}};
    basis.vectors.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        basis.vectors.push_back(ComplexMatrix::basis_vector(dim, i));
    }
    return basis;
}

MeasurementBasis MeasurementBasis::from_columns(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("basis matrix must be square, got " + shape_string(m));
    }
    MeasurementBasis basis{m.rows(), {}};
    for (std::size_t c = 0; c < m.cols(); ++c) {
        ComplexMatrix v(m.rows(), 1);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            v[r] = m(r, c);
        }
        basis.vectors.push_back(std::move(v));
    }
    return basis;
}

bool MeasurementBasis::is_standard() const {
    if (vectors.size() != dim) {
        return false;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (vectors[i] != ComplexMatrix::basis_vector(dim, i)) {
            return false;
        }
    }
    return true;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.path << ": " << v.message;
        if (v.residual) {
            out << " (residual " << *v.residual << ")";
        }
        out << '\n';
    }
    return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::invalid_argument("validation failed:\n" + report.to_string()),
      report_(std::move(report)) {}

ValidationReport validate_preparation(const Preparation& prep, Tolerance tol,
                                      const std::string& path) {
    ValidationReport report;
    check_dim(report, prep.dim_a, path + ".dim_a");
    check_dim(report, prep.dim_b, path + ".dim_b");

    const std::string amp_path = path + ".amplitudes";
    if (prep.amplitudes.size() != prep.dim_a) {
        report.violations.push_back({amp_path,
                                     "expected " + std::to_string(prep.dim_a) +
                                         " amplitudes, got " + std::to_string(prep.amplitudes.size()),
                                     std::nullopt});
    }
    double weight = 0.0;
    bool finite = true;
    for (const Complex& a : prep.amplitudes) {
        finite = finite && std::isfinite(a.real()) && std::isfinite(a.imag());
        weight += std::norm(a);
    }
    if (!finite) {
        report.violations.push_back({amp_path, "amplitudes must be finite", std::nullopt});
    } else if (!prep.amplitudes.empty() && std::abs(weight - 1.0) > tol.eps()) {
        report.violations.push_back(
            {amp_path, "sum of |alpha_i|^2 must be 1", std::abs(weight - 1.0)});
    }

    const std::string states_path = path + ".conditional_states";
    if (prep.conditional_states.size() != prep.dim_a) {
        report.violations.push_back({states_path,
                                     "expected " + std::to_string(prep.dim_a) + " states, got " +
                                         std::to_string(prep.conditional_states.size()),
                                     std::nullopt});
    }
    for (std::size_t i = 0; i < prep.conditional_states.size(); ++i) {
        const ComplexMatrix& chi = prep.conditional_states[i];
        const std::string chi_path = indexed(states_path, i);
        if (chi.rows() != prep.dim_b || chi.cols() != 1) {
            report.violations.push_back({chi_path,
                                         "expected " + std::to_string(prep.dim_b) +
                                             "x1 column, got " + shape_string(chi),
                                         std::nullopt});
            continue;
        }
        if (!chi.all_finite()) {
            report.violations.push_back({chi_path, "state has non-finite entries", std::nullopt});
            continue;
        }
        const double residual = std::abs(vector_norm(chi) - 1.0);
        if (residual > tol.eps()) {
            report.violations.push_back({chi_path, "state must have unit norm", residual});
        }
    }
    return report;
}

ValidationReport validate_basis(const MeasurementBasis& basis, std::size_t expected_dim,
                                Tolerance tol, const std::string& path) {
    ValidationReport report;
    if (basis.dim != expected_dim) {
        report.violations.push_back({path,
                                     "basis dimension " + std::to_string(basis.dim) +
                                         " does not match subsystem dimension " +
                                         std::to_string(expected_dim),
                                     std::nullopt});
        return report;
    }
    if (basis.vectors.size() != basis.dim) {
        report.violations.push_back({path,
                                     "expected " + std::to_string(basis.dim) + " vectors, got " +
                                         std::to_string(basis.vectors.size()),
                                     std::nullopt});
        return report;
    }
    bool shapes_ok = true;
    for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        const ComplexMatrix& v = basis.vectors[i];
        if (v.rows() != basis.dim || v.cols() != 1 || !v.all_finite()) {
            report.violations.push_back({indexed(path, i),
                                         "expected finite " + std::to_string(basis.dim) +
                                             "x1 column, got " + shape_string(v),
                                         std::nullopt});
            shapes_ok = false;
        }
    }
    if (!shapes_ok) {
        return report;
    }
    double residual = 0.0;
    for (std::size_t j = 0; j < basis.dim; ++j) {
        for (std::size_t k = j; k < basis.dim; ++k) {
            const Complex expected = j == k ? 1.0 : 0.0;
            residual = std::max(residual, std::abs(inner(basis.vectors[j], basis.vectors[k]) - expected));
        }
    }
    if (residual > tol.eps()) {
        report.violations.push_back({path, "basis is not orthonormal (max |<v_j|v_k> - delta_jk|)",
                                     residual});
    }
    return report;
}

ValidationReport validate_state(const BipartiteState& state, Tolerance tol) {
    ValidationReport report;
    check_dim(report, state.dim_a, "state.dim_a");
    check_dim(report, state.dim_b, "state.dim_b");
    if (state.vector.rows() != state.dim_a * state.dim_b || state.vector.cols() != 1) {
        report.violations.push_back({"state.vector",
                                     "expected " + std::to_string(state.dim_a * state.dim_b) +
                                         "x1 column, got " + shape_string(state.vector),
                                     std::nullopt});
        return report;
    }
    const double residual = std::abs(vector_norm(state.vector) - 1.0);
    if (residual > tol.eps()) {
        report.violations.push_back({"state.vector", "state must have unit norm", residual});
    }
    return report;
}

ValidationReport validate_scenario(const Scenario& s, Tolerance tol) {
    ValidationReport report = validate_preparation(s.preparation, tol);
    const std::size_t dim_a = s.dim_a();
    const std::size_t dim_b = s.dim_b();
    const bool dims_ok = dim_a > 0 && dim_b > 0 && dim_a <= kMaxSubsystemDim &&
                         dim_b <= kMaxSubsystemDim;
    if (!dims_ok) {
        return report;
    }

    if (s.evolution.kind == EvolutionKind::Local) {
        check_unitary(report, s.evolution.op, dim_b, tol, "evolution.operator");
        if (s.declared_local) {
            report.violations.push_back(
                {"declared_local", "only joint evolutions carry a declared local evolution",
                 std::nullopt});
        }
    } else {
        check_unitary(report, s.evolution.op, dim_a * dim_b, tol, "evolution.operator");
        if (!s.declared_local) {
            report.violations.push_back(
                {"declared_local", "joint evolution requires the conventional V_B", std::nullopt});
        } else {
            check_unitary(report, *s.declared_local, dim_b, tol, "declared_local");
        }
    }
    append(report, validate_basis(s.basis_a, dim_a, tol, "basis_a"));
    append(report, validate_basis(s.basis_b, dim_b, tol, "basis_b"));
    return report;
}

BipartiteState assemble_complete_state(const Preparation& prep, Tolerance tol) {
    if (auto report = validate_preparation(prep, tol); !report.ok()) {
        throw ValidationError(std::move(report));
    }
    BipartiteState state{prep.dim_a, prep.dim_b, ComplexMatrix(prep.dim_a * prep.dim_b, 1)};
    // sum_i alpha_i e_i (x) chi_i: the i-th block of dim_b entries is alpha_i chi_i.
    for (std::size_t i = 0; i < prep.dim_a; ++i) {
        const ComplexMatrix& chi = prep.conditional_states[i];
        for (std::size_t k = 0; k < prep.dim_b; ++k) {
            state.vector[i * prep.dim_b + k] = prep.amplitudes[i] * chi[k];
        }
    }
    return state;
}

}  // namespace conjoint
