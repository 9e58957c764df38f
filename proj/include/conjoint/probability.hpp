#pragma once

#include <optional>
#include <vector>

#include "conjoint/experiment.hpp"
#include "conjoint/linalg.hpp"

namespace conjoint {

/// Probabilities below this are treated as exact zeros.
inline constexpr double kProbabilityFloor = 1e-14;

/// Raised when an operation is handed an evolution kind it cannot express.
class EvolutionKindError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// p(a, b) over experimenter outcome a and system outcome b.
class JointTable {
public:
    /// Entries below kProbabilityFloor (including tiny negatives from
    /// round-off) are clamped to 0. Throws std::invalid_argument on
    /// shape mismatch, an entry below -eps, or a total off 1 by more than eps.
    JointTable(std::size_t dim_a, std::size_t dim_b, std::vector<double> p, Tolerance tol = {});

    [[nodiscard]] std::size_t dim_a() const noexcept { return dim_a_; }
    [[nodiscard]] std::size_t dim_b() const noexcept { return dim_b_; }
    [[nodiscard]] double operator()(std::size_t a, std::size_t b) const { return p_[a * dim_b_ + b]; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return p_; }

private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    std::vector<double> p_;
};

enum class Direction {
    Predictive,   ///< p(B=b | A=a), rows conditioned on a
    Retrodictive  ///< p(A=a | B=b), columns conditioned on b
};

/// Conditional probabilities laid out as dim_a x dim_b, whatever the direction.
/// Conditioning outcomes with zero marginal are unsupported; their entries are
/// undefined (NaN) rather than zero.
struct ConditionalTable {
    Direction direction = Direction::Predictive;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<double> p;
    /// Indexed by a (Predictive) or b (Retrodictive).
    std::vector<bool> support;

    [[nodiscard]] bool defined(std::size_t a, std::size_t b) const {
        return support[direction == Direction::Predictive ? a : b];
    }
    [[nodiscard]] std::optional<double> at(std::size_t a, std::size_t b) const {
        if (!defined(a, b)) {
            return std::nullopt;
        }
        return p[a * dim_b + b];
    }
};

/// mu_ij: amplitudes of |psi> in the basis e_i (x) V_B^dagger |j>_B.
struct CoefficientMatrix {
    ComplexMatrix mu;

    /// beta_ij = mu_ij / alpha_i, undefined when alpha_i == 0.
    [[nodiscard]] std::optional<Complex> beta(std::size_t i, std::size_t j, Complex alpha_i) const;
};

struct DivergenceReport {
    JointTable conventional_joint;  ///< |alpha_a|^2 p_conv(b|a) under the declared V_B
    JointTable complete_joint;      ///< from the full evolution of the entangled state
    double total_variation = 0.0;
    double max_entry_gap = 0.0;
};

/// Born rule: p[a,b] = |<b| V_B |chi_a>|^2. Rejects Joint evolutions.
ConditionalTable conventional_conditional(const Preparation& prep, const Evolution& evo,
                                          const MeasurementBasis& basis_b, Tolerance tol = {});

/// mu[i,j] = alpha_i <j| V_B |chi_i>. Rejects Joint evolutions.
CoefficientMatrix coefficient_matrix(const Preparation& prep, const Evolution& evo,
                                     const MeasurementBasis& basis_b, Tolerance tol = {});

/// p[a,b] = |(<a| (x) <b|) U |psi>|^2 with U = I_A (x) V_B or U_AB.
JointTable joint_distribution(const BipartiteState& state, const Evolution& evo,
                              const MeasurementBasis& basis_a, const MeasurementBasis& basis_b,
                              Tolerance tol = {});

std::vector<double> marginal_a(const JointTable& jt);
std::vector<double> marginal_b(const JointTable& jt);

ConditionalTable conditional(const JointTable& jt, Direction direction);

/// Checks p(a|b) p(b) == p(b|a) p(a) == p(a,b) on every pair supported by
/// both conditionals.
bool bayes_check(const JointTable& jt, const ConditionalTable& predictive,
                 const ConditionalTable& retrodictive, Tolerance tol = {});
bool bayes_check(const JointTable& jt, Tolerance tol = {});

/// Tr_over |psi><psi|.
ComplexMatrix reduced_density(const BipartiteState& state, Subsystem over);

/// sum_a |alpha_a|^2 |chi_a><chi_a|.
ComplexMatrix conventional_mixture(const Preparation& prep, Tolerance tol = {});

/// 0.5 * sum |p - q|, shared by the divergence report.
double total_variation(const JointTable& p, const JointTable& q);

/// Conventional (declared V_B, classical mixture) versus complete joint table.
DivergenceReport divergence_report(const Scenario& s, Tolerance tol = {});

}  // namespace conjoint
