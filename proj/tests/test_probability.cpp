#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conjoint/probability.hpp"
#include "conjoint/random_scenario.hpp"
#include "support.hpp"

using namespace conjoint;
using namespace conjoint::testing;

namespace {

ComplexMatrix ket(std::size_t dim, std::size_t i) { return ComplexMatrix::basis_vector(dim, i); }
ComplexMatrix ket_plus() { return ComplexMatrix::column({kHalfRoot, kHalfRoot}); }

Preparation bell_prep() { return {2, 2, {kHalfRoot, kHalfRoot}, {ket(2, 0), ket(2, 1)}}; }
Preparation overlapping_prep() { return {2, 2, {kHalfRoot, kHalfRoot}, {ket(2, 0), ket_plus()}}; }

const MeasurementBasis kStd2 = MeasurementBasis::standard(2);
const Evolution kNoEvolution = Evolution::local(ComplexMatrix::identity(2));

ComplexMatrix controlled_flip() {
    return ComplexMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
}

Scenario scenario(Preparation prep, Evolution evo, std::optional<ComplexMatrix> declared = {}) {
    Scenario s;
    const std::size_t da = prep.dim_a;
    const std::size_t db = prep.dim_b;
    s.preparation = std::move(prep);
    s.evolution = std::move(evo);
    s.declared_local = std::move(declared);
    s.basis_a = MeasurementBasis::standard(da);
    s.basis_b = MeasurementBasis::standard(db);
    return s;
}

JointTable table(std::size_t da, std::size_t db, std::vector<double> p) {
    return JointTable(da, db, std::move(p));
}

void check_table(const JointTable& t, const std::vector<double>& expected, double tol) {
    REQUIRE(t.values().size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CAPTURE(k);
        CHECK(std::abs(t.values()[k] - expected[k]) < tol);
    }
}

void check_values(const std::vector<double>& got, const std::vector<double>& expected, double tol) {
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CAPTURE(k);
        CHECK(std::abs(got[k] - expected[k]) <= tol);
    }
}

// Explicit 4x4 matrix-vector product, then squared magnitudes.
std::vector<double> squared_after(const ComplexMatrix& u, const std::vector<Complex>& psi) {
    std::vector<double> p(psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r) {
        Complex amp{};
        for (std::size_t c = 0; c < psi.size(); ++c) {
            amp += u(r, c) * psi[c];
        }
        p[r] = std::norm(amp);
    }
    return p;
}

}  // namespace

TEST_CASE("JointTable invariants") {
    CHECK_NOTHROW(table(1, 2, {0.25, 0.75}));
    CHECK_THROWS_AS(table(1, 2, {0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(table(1, 2, {-0.1, 1.1}), std::invalid_argument);
    CHECK_THROWS_AS(table(2, 2, {1.0}), DimensionError);
    const JointTable dust = table(1, 2, {1e-15, 1.0 - 1e-15});
    CHECK(dust(0, 0) == 0.0);
}

TEST_CASE("conventional_conditional") {
    SUBCASE("basis aligned") {
        const auto t = conventional_conditional({1, 2, {1.0}, {ket(2, 0)}}, kNoEvolution, kStd2);
        CHECK(t.direction == Direction::Predictive);
        check_values(t.p, {1.0, 0.0}, 1e-15);
    }
    SUBCASE("equal superposition") {
        const auto t = conventional_conditional({1, 2, {1.0}, {ket_plus()}}, kNoEvolution, kStd2);
        check_values(t.p, {0.5, 0.5}, 1e-15);
    }
    SUBCASE("matches |beta_ab|^2 from the coefficient matrix") {
        RngStream rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const Preparation prep = random_preparation(2 + static_cast<std::size_t>(trial % 3), 3, rng);
            const Evolution evo = Evolution::local(random_unitary(3, rng));
            const MeasurementBasis basis = MeasurementBasis::from_columns(random_unitary(3, rng));
            const auto born = conventional_conditional(prep, evo, basis);
            const auto mu = coefficient_matrix(prep, evo, basis);
            for (std::size_t a = 0; a < prep.dim_a; ++a) {
                for (std::size_t b = 0; b < 3; ++b) {
                    const auto beta = mu.beta(a, b, prep.amplitudes[a]);
                    REQUIRE(beta.has_value());
                    CHECK(std::abs(born.p[a * 3 + b] - std::norm(*beta)) < 1e-12);
                }
            }
        }
    }
    SUBCASE("joint evolutions cannot be expressed") {
        CHECK_THROWS_AS(conventional_conditional(bell_prep(), Evolution::joint(controlled_flip()), kStd2),
                        EvolutionKindError);
    }
    SUBCASE("invalid inputs are rejected at the boundary") {
        CHECK_THROWS_AS(conventional_conditional({2, 2, {1.0, 1.0}, {ket(2, 0), ket(2, 1)}},
                                                 kNoEvolution, kStd2),
                        ValidationError);
        CHECK_THROWS_AS(conventional_conditional(bell_prep(),
                                                 Evolution::local(ComplexMatrix::from_rows({{1, 0}, {0, 2}})),
                                                 kStd2),
                        ValidationError);
    }
}

TEST_CASE("coefficient_matrix") {
    SUBCASE("Bell") {
        const auto mu = coefficient_matrix(bell_prep(), kNoEvolution, kStd2);
        CHECK(max_abs_diff(mu.mu, kHalfRoot * ComplexMatrix::identity(2)) < 1e-15);
    }
    SUBCASE("non-orthogonal") {
        const auto mu = coefficient_matrix(overlapping_prep(), kNoEvolution, kStd2);
        // mu_ij = alpha_i <j|chi_i>, worked by hand: chi_1 = |+> gives 1/sqrt2 * 1/sqrt2.
        CHECK(max_abs_diff(mu.mu, ComplexMatrix::from_rows({{kHalfRoot, 0}, {0.5, 0.5}})) < 1e-15);
    }
    SUBCASE("zero amplitude zeroes its row and leaves beta undefined") {
        const Preparation prep{2, 2, {0.0, 1.0}, {ket_plus(), ket(2, 1)}};
        const auto mu = coefficient_matrix(prep, kNoEvolution, kStd2);
        CHECK(mu.mu(0, 0) == Complex{});
        CHECK(mu.mu(0, 1) == Complex{});
        CHECK_FALSE(mu.beta(0, 0, prep.amplitudes[0]).has_value());
        CHECK(mu.beta(1, 1, prep.amplitudes[1]).value() == Complex(1.0));
    }
    SUBCASE("row weights equal |alpha_i|^2 and the total is 1") {
        RngStream rng(32);
        for (int trial = 0; trial < 100; ++trial) {
            const auto da = static_cast<std::size_t>(2 + trial % 5);
            const auto db = static_cast<std::size_t>(2 + (trial / 5) % 5);
            const Preparation prep = random_preparation(da, db, rng);
            const auto mu = coefficient_matrix(prep, Evolution::local(random_unitary(db, rng)),
                                               MeasurementBasis::from_columns(random_unitary(db, rng)));
            double total = 0.0;
            for (std::size_t i = 0; i < da; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < db; ++j) {
                    row += std::norm(mu.mu(i, j));
                }
                CHECK(std::abs(row - std::norm(prep.amplitudes[i])) < 1e-10);
                total += row;
            }
            CHECK(std::abs(total - 1.0) < 1e-10);
        }
    }
    SUBCASE("joint evolution rejected") {
        CHECK_THROWS_AS(coefficient_matrix(bell_prep(), Evolution::joint(controlled_flip()), kStd2),
                        EvolutionKindError);
    }
}

TEST_CASE("joint_distribution") {
    SUBCASE("Bell, no evolution") {
        const auto jt = joint_distribution(assemble_complete_state(bell_prep()), kNoEvolution, kStd2, kStd2);
        check_table(jt, {0.5, 0, 0, 0.5}, 1e-15);
    }
    SUBCASE("non-orthogonal equals |mu_ab|^2") {
        const auto jt =
            joint_distribution(assemble_complete_state(overlapping_prep()), kNoEvolution, kStd2, kStd2);
        const auto mu = coefficient_matrix(overlapping_prep(), kNoEvolution, kStd2);
        std::vector<double> expected;
        for (const Complex& z : mu.mu.entries()) {
            expected.push_back(std::norm(z));
        }
        check_table(jt, expected, 1e-15);
        check_table(jt, {0.5, 0, 0.25, 0.25}, 1e-15);
    }
    SUBCASE("Bell under a controlled flip") {
        const auto jt = joint_distribution(assemble_complete_state(bell_prep()),
                                           Evolution::joint(controlled_flip()), kStd2, kStd2);
        const auto oracle = squared_after(controlled_flip(), {kHalfRoot, 0, 0, kHalfRoot});
        check_table(jt, oracle, 1e-15);
        check_table(jt, {0.5, 0, 0.5, 0}, 1e-15);
    }
    SUBCASE("dimension mismatch") {
        const auto state = assemble_complete_state(bell_prep());
        CHECK_THROWS_AS(joint_distribution(state, Evolution::local(ComplexMatrix::identity(3)), kStd2, kStd2),
                        DimensionError);
        CHECK_THROWS_AS(joint_distribution(state, Evolution::joint(ComplexMatrix::identity(2)), kStd2, kStd2),
                        DimensionError);
        CHECK_THROWS_AS(
            joint_distribution(state, kNoEvolution, MeasurementBasis::standard(3), kStd2),
            ValidationError);
    }
    SUBCASE("cross-path equality with |mu|^2 on random local scenarios") {
        RngStream rng(33);
        for (int trial = 0; trial < 200; ++trial) {
            const auto da = static_cast<std::size_t>(2 + trial % 5);
            const auto db = static_cast<std::size_t>(2 + (trial / 5) % 5);
            const Scenario s = random_local_scenario(da, db, rng);
            const auto jt = joint_distribution(assemble_complete_state(s.preparation), s.evolution,
                                               s.basis_a, s.basis_b);
            const auto mu = coefficient_matrix(s.preparation, s.evolution, s.basis_b);
            for (std::size_t k = 0; k < jt.values().size(); ++k) {
                CHECK(std::abs(jt.values()[k] - std::norm(mu.mu[k])) < 1e-10);
            }
        }
    }
}

TEST_CASE("marginals") {
    const auto bell = table(2, 2, {0.5, 0, 0, 0.5});
    check_values(marginal_a(bell), {0.5, 0.5}, 0);
    check_values(marginal_b(bell), {0.5, 0.5}, 0);

    const auto overlap = table(2, 2, {0.5, 0, 0.25, 0.25});
    check_values(marginal_a(overlap), {0.5, 0.5}, 1e-15);
    check_values(marginal_b(overlap), {0.75, 0.25}, 1e-15);

    const auto single = table(1, 2, {1, 0});
    check_values(marginal_a(single), {1.0}, 0);

    const auto cnot = table(2, 2, {0.5, 0, 0.5, 0});
    check_values(marginal_b(cnot), {1.0, 0.0}, 0);
}

TEST_CASE("conditional") {
    SUBCASE("Bell retrodiction is the identity") {
        const auto t = conditional(table(2, 2, {0.5, 0, 0, 0.5}), Direction::Retrodictive);
        check_values(t.p, {1, 0, 0, 1}, 1e-15);
        CHECK(t.support == std::vector<bool>{true, true});
    }
    SUBCASE("non-orthogonal retrodiction") {
        const auto t = conditional(table(2, 2, {0.5, 0, 0.25, 0.25}), Direction::Retrodictive);
        CHECK(t.at(0, 0).value() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(t.at(1, 0).value() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(t.at(0, 1).value() == 0.0);
        CHECK(t.at(1, 1).value() == doctest::Approx(1.0));
    }
    SUBCASE("zero marginal is masked, not zero") {
        const auto t = conditional(table(2, 2, {0.5, 0, 0.5, 0}), Direction::Retrodictive);
        CHECK(t.support == std::vector<bool>{true, false});
        CHECK_FALSE(t.at(0, 1).has_value());
        CHECK_FALSE(t.at(1, 1).has_value());
        CHECK(std::isnan(t.p[1]));
        CHECK(t.at(0, 0).value() == doctest::Approx(0.5));
    }
    SUBCASE("predictive rows with zero weight are masked") {
        const auto t = conditional(table(2, 2, {0, 0, 0.3, 0.7}), Direction::Predictive);
        CHECK(t.support == std::vector<bool>{false, true});
        CHECK(t.at(1, 1).value() == doctest::Approx(0.7));
    }
}

TEST_CASE("bayes_check") {
    CHECK(bayes_check(table(2, 2, {0.5, 0, 0, 0.5})));

    SUBCASE("holds on every generated table") {
        RngStream rng(34);
        for (int trial = 0; trial < 100; ++trial) {
            const auto da = static_cast<std::size_t>(2 + trial % 5);
            const auto db = static_cast<std::size_t>(2 + (trial / 5) % 5);
            const Scenario s = trial % 2 == 0 ? random_local_scenario(da, db, rng)
                                              : random_joint_scenario(da, db, rng);
            CHECK(bayes_check(joint_distribution(assemble_complete_state(s.preparation), s.evolution,
                                                 s.basis_a, s.basis_b)));
        }
    }
    SUBCASE("mismatched conditionals are caught") {
        const auto original = table(2, 2, {0.4, 0.1, 0.2, 0.3});
        // One entry perturbed, then renormalized.
        std::vector<double> p = {0.5, 0.1, 0.2, 0.3};
        for (double& x : p) {
            x /= 1.1;
        }
        const auto perturbed = JointTable(2, 2, p);
        CHECK(bayes_check(perturbed));
        CHECK_FALSE(bayes_check(perturbed, conditional(original, Direction::Predictive),
                                conditional(perturbed, Direction::Retrodictive)));
        CHECK_FALSE(bayes_check(original, conditional(original, Direction::Predictive),
                                conditional(perturbed, Direction::Retrodictive)));
    }
    SUBCASE("argument order is enforced") {
        const auto t = table(2, 2, {0.5, 0, 0, 0.5});
        CHECK_THROWS_AS(bayes_check(t, conditional(t, Direction::Retrodictive),
                                    conditional(t, Direction::Predictive)),
                        std::invalid_argument);
    }
}

TEST_CASE("reduced_density and conventional_mixture") {
    SUBCASE("product state") {
        const auto state = assemble_complete_state({1, 2, {1.0}, {ket(2, 0)}});
        CHECK(reduced_density(state, Subsystem::A) == projector(ket(2, 0)));
        CHECK(conventional_mixture({1, 2, {1.0}, {ket(2, 0)}}) == projector(ket(2, 0)));
    }
    SUBCASE("Bell") {
        const auto half = 0.5 * ComplexMatrix::identity(2);
        CHECK(max_abs_diff(reduced_density(assemble_complete_state(bell_prep()), Subsystem::A), half) < 1e-15);
        CHECK(max_abs_diff(conventional_mixture(bell_prep()), half) < 1e-15);
    }
    SUBCASE("reduction identity on random preparations, overlapping chi included") {
        RngStream rng(35);
        for (int trial = 0; trial < 200; ++trial) {
            const auto da = static_cast<std::size_t>(1 + trial % 6);
            const auto db = static_cast<std::size_t>(2 + (trial / 6) % 5);
            const Preparation prep = random_preparation(da, db, rng);
            const ComplexMatrix reduced = reduced_density(assemble_complete_state(prep), Subsystem::A);
            // Direct sum written out here, independent of conventional_mixture.
            ComplexMatrix direct(db, db);
            for (std::size_t i = 0; i < da; ++i) {
                const ComplexMatrix& chi = prep.conditional_states[i];
                for (std::size_t k = 0; k < db; ++k) {
                    for (std::size_t l = 0; l < db; ++l) {
                        direct(k, l) += std::norm(prep.amplitudes[i]) * chi[k] * std::conj(chi[l]);
                    }
                }
            }
            CHECK(max_abs_diff(reduced, direct) < 1e-10);
            CHECK(max_abs_diff(conventional_mixture(prep), reduced) < 1e-10);
            CHECK(std::abs(trace(reduced) - 1.0) < 1e-10);
            CHECK(max_abs_diff(reduced, adjoint(reduced)) < 1e-14);
            const auto eigen = hermitian_eigenvalues(reduced);
            CHECK(eigen.front() > -1e-10);
        }
    }
}

TEST_CASE("divergence_report") {
    SUBCASE("local evolution: descriptions agree") {
        RngStream rng(36);
        for (int trial = 0; trial < 50; ++trial) {
            const Scenario s = random_local_scenario(2 + static_cast<std::size_t>(trial % 4),
                                                     2 + static_cast<std::size_t>(trial % 3), rng);
            const auto r = divergence_report(s);
            CHECK(r.total_variation < 1e-10);
            CHECK(r.max_entry_gap < 1e-10);
        }
    }
    SUBCASE("controlled flip against a declared identity") {
        const Scenario s = scenario(bell_prep(), Evolution::joint(controlled_flip()), ComplexMatrix::identity(2));
        const auto r = divergence_report(s);
        check_table(r.conventional_joint, {0.5, 0, 0, 0.5}, 1e-15);
        check_table(r.complete_joint, {0.5, 0, 0.5, 0}, 1e-15);
        CHECK(std::abs(r.total_variation - 0.5) < 1e-12);
        CHECK(std::abs(r.max_entry_gap - 0.5) < 1e-12);
    }
    SUBCASE("I (x) V embedded as a joint operator") {
        RngStream rng(37);
        for (int trial = 0; trial < 50; ++trial) {
            const auto da = static_cast<std::size_t>(2 + trial % 4);
            const auto db = static_cast<std::size_t>(2 + (trial / 4) % 4);
            const ComplexMatrix v = random_unitary(db, rng);
            Scenario s = scenario(random_preparation(da, db, rng),
                                  Evolution::joint(tensor_product(ComplexMatrix::identity(da), v)), v);
            s.basis_b = MeasurementBasis::from_columns(random_unitary(db, rng));
            const auto r = divergence_report(s);
            CHECK(r.total_variation < 1e-10);
        }
    }
    SUBCASE("total variation is half the L1 gap") {
        RngStream rng(38);
        const Scenario s = random_joint_scenario(3, 4, rng);
        const auto r = divergence_report(s);
        double l1 = 0.0;
        for (std::size_t k = 0; k < 12; ++k) {
            l1 += std::abs(r.conventional_joint.values()[k] - r.complete_joint.values()[k]);
        }
        CHECK(r.total_variation == doctest::Approx(0.5 * l1).epsilon(1e-14));
        CHECK(r.total_variation > 0.0);
        CHECK(r.total_variation <= 1.0);
    }
    SUBCASE("invalid scenario rejected") {
        Scenario s = scenario(bell_prep(), Evolution::joint(controlled_flip()));
        CHECK_THROWS_AS(divergence_report(s), ValidationError);
    }
}

TEST_CASE("predictive conditional of the joint equals the Born rule") {
    RngStream rng(39);
    for (int trial = 0; trial < 100; ++trial) {
        const auto da = static_cast<std::size_t>(2 + trial % 5);
        const auto db = static_cast<std::size_t>(2 + (trial / 5) % 5);
        Scenario s = random_local_scenario(da, db, rng);
        if (trial % 10 == 0) {
            s.preparation.amplitudes[0] = 0.0;
            double w = 0.0;
            for (const auto& a : s.preparation.amplitudes) {
                w += std::norm(a);
            }
            for (auto& a : s.preparation.amplitudes) {
                a /= std::sqrt(w);
            }
        }
        const auto jt = joint_distribution(assemble_complete_state(s.preparation), s.evolution,
                                           s.basis_a, s.basis_b);
        const auto predicted = conditional(jt, Direction::Predictive);
        const auto born = conventional_conditional(s.preparation, s.evolution, s.basis_b);
        for (std::size_t a = 0; a < da; ++a) {
            if (std::norm(s.preparation.amplitudes[a]) == 0.0) {
                CHECK_FALSE(predicted.support[a]);
                continue;
            }
            double row = 0.0;
            for (std::size_t b = 0; b < db; ++b) {
                CHECK(std::abs(predicted.at(a, b).value() - born.p[a * db + b]) < 1e-10);
                row += predicted.at(a, b).value();
            }
            CHECK(std::abs(row - 1.0) < 1e-10);
        }
    }
}
