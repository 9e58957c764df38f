#include "conjoint/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace conjoint {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

void require_valid(ValidationReport report) {
    if (!report.ok()) {
        throw ValidationError(std::move(report));
    }
}

const ComplexMatrix& require_local(const Evolution& evo, const char* op) {
    if (evo.kind != EvolutionKind::Local) {
        throw EvolutionKindError(std::string(op) +
                                 ": a joint experimenter-system evolution has no description as "
                                 "a unitary on the system alone");
    }
    return evo.op;
}

void require_local_inputs(const Preparation& prep, const Evolution& evo,
                          const MeasurementBasis& basis_b, Tolerance tol, const char* op) {
    const ComplexMatrix& v_b = require_local(evo, op);
    ValidationReport report = validate_preparation(prep, tol);
    if (report.ok()) {
        if (v_b.rows() != prep.dim_b || v_b.cols() != prep.dim_b) {
            report.violations.push_back({"evolution.operator",
                                         "expected " + std::to_string(prep.dim_b) + "x" +
                                             std::to_string(prep.dim_b) + ", got " +
                                             shape_string(v_b),
                                         std::nullopt});
        } else if (!is_unitary(v_b, tol)) {
            report.violations.push_back(
                {"evolution.operator", "operator is not unitary", unitarity_residual(v_b)});
        }
        for (auto& v : validate_basis(basis_b, prep.dim_b, tol, "basis_b").violations) {
            report.violations.push_back(std::move(v));
        }
    }
    require_valid(std::move(report));
}

// Rows are <v|, i.e. the conjugated basis vectors laid out as a matrix.
ComplexMatrix bra_rows(const MeasurementBasis& basis) {
    ComplexMatrix out(basis.dim, basis.dim);
    for (std::size_t r = 0; r < basis.dim; ++r) {
        for (std::size_t c = 0; c < basis.dim; ++c) {
            out(r, c) = std::conj(basis.vectors[r][c]);
        }
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(c, r) = m(r, c);
        }
    }
    return out;
}

}  // namespace

JointTable::JointTable(std::size_t dim_a, std::size_t dim_b, std::vector<double> p, Tolerance tol)
    : dim_a_(dim_a), dim_b_(dim_b), p_(std::move(p)) {
    if (dim_a == 0 || dim_b == 0 || p_.size() != dim_a * dim_b) {
        throw DimensionError("joint table " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                             " needs " + std::to_string(dim_a * dim_b) + " entries, got " +
                             std::to_string(p_.size()));
    }
    double total = 0.0;
    for (double& x : p_) {
        if (!std::isfinite(x) || x < -tol.eps()) {
            throw std::invalid_argument("joint table entries must be finite and non-negative");
        }
        if (x < kProbabilityFloor) {
            x = 0.0;
        }
        total += x;
    }
    if (std::abs(total - 1.0) > tol.eps()) {
        throw std::invalid_argument("joint table must sum to 1, residual " +
                                    std::to_string(std::abs(total - 1.0)));
    }
}

std::optional<Complex> CoefficientMatrix::beta(std::size_t i, std::size_t j, Complex alpha_i) const {
    if (alpha_i == Complex{}) {
        return std::nullopt;
    }
    return mu(i, j) / alpha_i;
}

ConditionalTable conventional_conditional(const Preparation& prep, const Evolution& evo,
                                          const MeasurementBasis& basis_b, Tolerance tol) {
    require_local_inputs(prep, evo, basis_b, tol, "conventional_conditional");
    ConditionalTable table{Direction::Predictive, prep.dim_a, prep.dim_b,
                           std::vector<double>(prep.dim_a * prep.dim_b),
                           std::vector<bool>(prep.dim_a, true)};
    for (std::size_t a = 0; a < prep.dim_a; ++a) {
        const ComplexMatrix evolved = matmul(evo.op, prep.conditional_states[a]);
        for (std::size_t b = 0; b < prep.dim_b; ++b) {
            const double p = std::norm(inner(basis_b.vectors[b], evolved));
            table.p[a * prep.dim_b + b] = p < kProbabilityFloor ? 0.0 : p;
        }
    }
    return table;
}

CoefficientMatrix coefficient_matrix(const Preparation& prep, const Evolution& evo,
                                     const MeasurementBasis& basis_b, Tolerance tol) {
    require_local_inputs(prep, evo, basis_b, tol, "coefficient_matrix");
    CoefficientMatrix out{ComplexMatrix(prep.dim_a, prep.dim_b)};
    for (std::size_t i = 0; i < prep.dim_a; ++i) {
        const ComplexMatrix evolved = matmul(evo.op, prep.conditional_states[i]);
        for (std::size_t j = 0; j < prep.dim_b; ++j) {
            out.mu(i, j) = prep.amplitudes[i] * inner(basis_b.vectors[j], evolved);
        }
    }
    return out;
}

JointTable joint_distribution(const BipartiteState& state, const Evolution& evo,
                              const MeasurementBasis& basis_a, const MeasurementBasis& basis_b,
                              Tolerance tol) {
    ValidationReport report = validate_state(state, tol);
    if (report.ok()) {
        for (auto& v : validate_basis(basis_a, state.dim_a, tol, "basis_a").violations) {
            report.violations.push_back(std::move(v));
        }
        for (auto& v : validate_basis(basis_b, state.dim_b, tol, "basis_b").violations) {
            report.violations.push_back(std::move(v));
        }
        const std::size_t side = evo.kind == EvolutionKind::Local ? state.dim_b
                                                                   : state.dim_a * state.dim_b;
        if (evo.op.rows() != side || evo.op.cols() != side) {
            throw DimensionError("joint_distribution: evolution operator " + shape_string(evo.op) +
                                 " does not act on dimension " + std::to_string(side));
        }
    }
    require_valid(std::move(report));

    const std::size_t dim_a = state.dim_a;
    const std::size_t dim_b = state.dim_b;

    // Amplitudes of U|psi> arranged as a dim_a x dim_b matrix (A index major).
    ComplexMatrix evolved(dim_a, dim_b);
    if (evo.kind == EvolutionKind::Local) {
        // (I (x) V)|psi>: V acts on each dim_b block, i.e. Psi V^T.
        ComplexMatrix psi(dim_a, dim_b, std::vector<Complex>(state.vector.entries().begin(),
                                                             state.vector.entries().end()));
        evolved = matmul(psi, transpose(evo.op));
    } else {
        const ComplexMatrix phi = matmul(evo.op, state.vector);
        evolved = ComplexMatrix(dim_a, dim_b,
                                std::vector<Complex>(phi.entries().begin(), phi.entries().end()));
    }

    // amp[a,b] = sum_ik conj(a_i) evolved[i,k] conj(b_k)
    const ComplexMatrix amplitudes =
        matmul(matmul(bra_rows(basis_a), evolved), transpose(bra_rows(basis_b)));

    std::vector<double> p(dim_a * dim_b);
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::norm(amplitudes[k]);
    }
    try {
        return JointTable(dim_a, dim_b, std::move(p), tol);
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("joint_distribution produced an invalid table: ") + e.what());
    }
}

std::vector<double> marginal_a(const JointTable& jt) {
    std::vector<double> out(jt.dim_a(), 0.0);
    for (std::size_t a = 0; a < jt.dim_a(); ++a) {
        for (std::size_t b = 0; b < jt.dim_b(); ++b) {
            out[a] += jt(a, b);
        }
    }
    return out;
}

std::vector<double> marginal_b(const JointTable& jt) {
    std::vector<double> out(jt.dim_b(), 0.0);
    for (std::size_t a = 0; a < jt.dim_a(); ++a) {
        for (std::size_t b = 0; b < jt.dim_b(); ++b) {
            out[b] += jt(a, b);
        }
    }
    return out;
}

ConditionalTable conditional(const JointTable& jt, Direction direction) {
    const bool predictive = direction == Direction::Predictive;
    const std::vector<double> marginal = predictive ? marginal_a(jt) : marginal_b(jt);
    ConditionalTable table{direction, jt.dim_a(), jt.dim_b(),
                           std::vector<double>(jt.dim_a() * jt.dim_b(), kUndefined),
                           std::vector<bool>(marginal.size())};
    for (std::size_t k = 0; k < marginal.size(); ++k) {
        table.support[k] = marginal[k] >= kProbabilityFloor;
    }
    for (std::size_t a = 0; a < jt.dim_a(); ++a) {
        for (std::size_t b = 0; b < jt.dim_b(); ++b) {
            const std::size_t given = predictive ? a : b;
            if (table.support[given]) {
                table.p[a * jt.dim_b() + b] = jt(a, b) / marginal[given];
            }
        }
    }
    return table;
}

bool bayes_check(const JointTable& jt, const ConditionalTable& predictive,
                 const ConditionalTable& retrodictive, Tolerance tol) {
    if (predictive.direction != Direction::Predictive ||
        retrodictive.direction != Direction::Retrodictive) {
        throw std::invalid_argument("bayes_check: conditionals passed in the wrong order");
    }
    const auto check_shape = [&](const ConditionalTable& t) {
        if (t.dim_a != jt.dim_a() || t.dim_b != jt.dim_b()) {
            throw DimensionError("bayes_check: conditional table shape does not match joint");
        }
    };
    check_shape(predictive);
    check_shape(retrodictive);

    const std::vector<double> pa = marginal_a(jt);
    const std::vector<double> pb = marginal_b(jt);
    for (std::size_t a = 0; a < jt.dim_a(); ++a) {
        for (std::size_t b = 0; b < jt.dim_b(); ++b) {
            const auto forward = predictive.at(a, b);
            const auto backward = retrodictive.at(a, b);
            if (!forward || !backward) {
                continue;
            }
            const double via_b = *backward * pb[b];
            const double via_a = *forward * pa[a];
            if (std::abs(via_b - via_a) > tol.eps() || std::abs(via_a - jt(a, b)) > tol.eps()) {
                return false;
            }
        }
    }
    return true;
}

bool bayes_check(const JointTable& jt, Tolerance tol) {
    return bayes_check(jt, conditional(jt, Direction::Predictive),
                       conditional(jt, Direction::Retrodictive), tol);
}

ComplexMatrix reduced_density(const BipartiteState& state, Subsystem over) {
    require_valid(validate_state(state));
    return partial_trace(projector(state.vector), state.dim_a, state.dim_b, over);
}

ComplexMatrix conventional_mixture(const Preparation& prep, Tolerance tol) {
    require_valid(validate_preparation(prep, tol));
    ComplexMatrix rho(prep.dim_b, prep.dim_b);
    for (std::size_t a = 0; a < prep.dim_a; ++a) {
        rho += std::norm(prep.amplitudes[a]) * projector(prep.conditional_states[a]);
    }
    return rho;
}

double total_variation(const JointTable& p, const JointTable& q) {
    if (p.dim_a() != q.dim_a() || p.dim_b() != q.dim_b()) {
        throw DimensionError("total_variation: tables differ in shape");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < p.values().size(); ++k) {
        sum += std::abs(p.values()[k] - q.values()[k]);
    }
    return 0.5 * sum;
}

DivergenceReport divergence_report(const Scenario& s, Tolerance tol) {
    require_valid(validate_scenario(s, tol));
    const Preparation& prep = s.preparation;
    const Evolution declared = s.evolution.kind == EvolutionKind::Local
                                   ? s.evolution
                                   : Evolution::local(*s.declared_local);

    const ConditionalTable born = conventional_conditional(prep, declared, s.basis_b, tol);
    std::vector<double> conv(prep.dim_a * prep.dim_b);
    for (std::size_t a = 0; a < prep.dim_a; ++a) {
        const double weight = std::norm(prep.amplitudes[a]);
        for (std::size_t b = 0; b < prep.dim_b; ++b) {
            conv[a * prep.dim_b + b] = weight * born.p[a * prep.dim_b + b];
        }
    }
    JointTable conventional(prep.dim_a, prep.dim_b, std::move(conv), tol);
    JointTable complete = joint_distribution(assemble_complete_state(prep, tol), s.evolution,
                                             s.basis_a, s.basis_b, tol);

    double gap = 0.0;
    for (std::size_t k = 0; k < conventional.values().size(); ++k) {
        gap = std::max(gap, std::abs(conventional.values()[k] - complete.values()[k]));
    }
    const double tv = total_variation(conventional, complete);
    return DivergenceReport{std::move(conventional), std::move(complete), tv, gap};
}

}  // namespace conjoint
