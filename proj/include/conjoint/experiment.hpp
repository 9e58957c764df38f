#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conjoint/complex_matrix.hpp"

namespace conjoint {

/// Subsystem dimensions are capped so the enumeration oracle stays cheap.
inline constexpr std::size_t kMaxSubsystemDim = 64;

/// Preparation outcome amplitudes alpha_i together with the state chi_i the
/// system is left in when the experimenter records outcome i. The outcome
/// states of the experimenter are the standard basis of H_A.
struct Preparation {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<Complex> amplitudes;
    std::vector<ComplexMatrix> conditional_states;  ///< each dim_b x 1; need not be orthogonal

    friend bool operator==(const Preparation&, const Preparation&) = default;
};

/// Orthonormal measurement basis, one column per outcome.
struct MeasurementBasis {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> vectors;

    static MeasurementBasis standard(std::size_t dim);
    /// Columns of a square matrix taken as basis vectors.
    static MeasurementBasis from_columns(const ComplexMatrix& m);
    [[nodiscard]] bool is_standard() const;

    friend bool operator==(const MeasurementBasis&, const MeasurementBasis&) = default;
};

enum class EvolutionKind { Local, Joint };

/// Local: V_B acting on the system only (I_A (x) V_B overall).
/// Joint: an arbitrary unitary on the composite space.
struct Evolution {
    EvolutionKind kind = EvolutionKind::Local;
    ComplexMatrix op;

    static Evolution local(ComplexMatrix v_b) { return {EvolutionKind::Local, std::move(v_b)}; }
    static Evolution joint(ComplexMatrix u_ab) { return {EvolutionKind::Joint, std::move(u_ab)}; }

    friend bool operator==(const Evolution&, const Evolution&) = default;
};

/// Unit vector on C^dim_a (x) C^dim_b, A index major.
struct BipartiteState {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    ComplexMatrix vector;
};

struct StageLabels {
    std::string t_a;
    std::string t_b;

    friend bool operator==(const StageLabels&, const StageLabels&) = default;
};

struct Scenario {
    Preparation preparation;
    Evolution evolution;
    MeasurementBasis basis_a;
    MeasurementBasis basis_b;
    /// What the conventional description assumes happens to B. Required for
    /// Joint evolutions, absent for Local ones.
    std::optional<ComplexMatrix> declared_local;
    std::optional<StageLabels> labels;

    [[nodiscard]] std::size_t dim_a() const { return preparation.dim_a; }
    [[nodiscard]] std::size_t dim_b() const { return preparation.dim_b; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct Violation {
    std::string path;      ///< e.g. "preparation.amplitudes"
    std::string message;
    std::optional<double> residual;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string to_string() const;
};

/// Thrown at the engine boundary when an input fails validation.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(ValidationReport report);
    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

ValidationReport validate_preparation(const Preparation& prep, Tolerance tol = {},
                                      const std::string& path = "preparation");
ValidationReport validate_basis(const MeasurementBasis& basis, std::size_t expected_dim,
                                Tolerance tol, const std::string& path);
ValidationReport validate_state(const BipartiteState& state, Tolerance tol = {});

/// Collects every violated invariant; never throws.
ValidationReport validate_scenario(const Scenario& s, Tolerance tol = {});

/// |psi> = sum_i alpha_i e_i (x) chi_i. Throws ValidationError if prep is invalid.
BipartiteState assemble_complete_state(const Preparation& prep, Tolerance tol = {});

}  // namespace conjoint
