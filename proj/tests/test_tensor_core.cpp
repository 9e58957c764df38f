#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "conjoint/linalg.hpp"
#include "conjoint/random_scenario.hpp"
#include "support.hpp"

using namespace conjoint;
using namespace conjoint::testing;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }

// Independent oracles: written against raw indices, not the library kernels.
ComplexMatrix naive_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    std::vector<Complex> out(a.rows() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            for (std::size_t k = 0; k < a.cols(); ++k) {
                out[i * b.cols() + j] += a.entries()[i * a.cols() + k] * b.entries()[k * b.cols() + j];
            }
        }
    }
    return ComplexMatrix(a.rows(), b.cols(), out);
}

ComplexMatrix kron_by_index(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    std::vector<Complex> out(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            out[r * cols + c] = a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
        }
    }
    return ComplexMatrix(rows, cols, out);
}

}  // namespace

TEST_CASE("tolerance bounds") {
    CHECK(Tolerance{}.eps() == doctest::Approx(1e-10));
    CHECK_NOTHROW(Tolerance(1e-6));
    CHECK_THROWS_AS(Tolerance(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Tolerance(1e-3), std::invalid_argument);
    CHECK_THROWS_AS(Tolerance(-1e-9), std::invalid_argument);
}

TEST_CASE("matrix construction rejects bad shapes and non-finite entries") {
    CHECK_THROWS_AS(ComplexMatrix(0, 2), DimensionError);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(std::nan(""), 0)}), NumericalError);
    CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(0, INFINITY)}), NumericalError);
}

TEST_CASE("matmul") {
    RngStream rng(11);
    SUBCASE("identity") {
        const ComplexMatrix m = random_matrix(2, 2, rng);
        CHECK(matmul(ComplexMatrix::identity(2), m) == m);
    }
    SUBCASE("bit flip is an involution") {
        CHECK(matmul(pauli_x(), pauli_x()) == ComplexMatrix::identity(2));
    }
    SUBCASE("random 3x3 against triple loop") {
        const ComplexMatrix a = random_matrix(3, 3, rng);
        const ComplexMatrix b = random_matrix(3, 3, rng);
        CHECK(max_abs_diff(matmul(a, b), naive_product(a, b)) < 1e-12);
    }
    SUBCASE("rectangular") {
        const ComplexMatrix a = random_matrix(2, 5, rng);
        const ComplexMatrix b = random_matrix(5, 3, rng);
        const ComplexMatrix p = matmul(a, b);
        CHECK(p.rows() == 2);
        CHECK(p.cols() == 3);
        CHECK(max_abs_diff(p, naive_product(a, b)) < 1e-12);
    }
    SUBCASE("shape mismatch reports both shapes") {
        try {
            (void)matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3));
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            const std::string what = e.what();
            CHECK(what.find("2x3") != std::string::npos);
            CHECK(what.find("by 2x3") != std::string::npos);
        }
    }
}

TEST_CASE("adjoint") {
    RngStream rng(12);
    CHECK(adjoint(ComplexMatrix::identity(2)) == ComplexMatrix::identity(2));
    const ComplexMatrix m = random_matrix(3, 4, rng);
    CHECK(adjoint(adjoint(m)) == m);
    const ComplexMatrix upper = ComplexMatrix::from_rows({{0, I}, {0, 0}});
    CHECK(adjoint(upper) == ComplexMatrix::from_rows({{0, 0}, {-I, 0}}));
}

TEST_CASE("tensor_product") {
    RngStream rng(13);
    const ComplexMatrix ket0 = ComplexMatrix::basis_vector(2, 0);
    CHECK(tensor_product(ket0, ket0) == ComplexMatrix::basis_vector(4, 0));
    CHECK(tensor_product(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) ==
          ComplexMatrix::identity(4));
    const ComplexMatrix a = random_matrix(2, 2, rng);
    const ComplexMatrix b = random_matrix(2, 2, rng);
    CHECK(max_abs_diff(tensor_product(a, b), kron_by_index(a, b)) == 0.0);
    const ComplexMatrix c = random_matrix(2, 3, rng);
    const ComplexMatrix d = random_matrix(3, 1, rng);
    CHECK(max_abs_diff(tensor_product(c, d), kron_by_index(c, d)) == 0.0);
}

TEST_CASE("trace") {
    RngStream rng(14);
    CHECK(trace(ComplexMatrix::identity(4)) == Complex(4.0));
    const ComplexMatrix v = random_unit_vector(5, rng);
    CHECK(std::abs(trace(projector(v)) - 1.0) < 1e-12);
    const ComplexMatrix a = random_matrix(4, 4, rng);
    const ComplexMatrix b = random_matrix(4, 4, rng);
    CHECK(std::abs(trace(matmul(a, b)) - trace(matmul(b, a))) < 1e-12);
    CHECK_THROWS_AS(trace(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("partial_trace") {
    const ComplexMatrix ket00 = ComplexMatrix::basis_vector(4, 0);
    const ComplexMatrix ket0 = ComplexMatrix::basis_vector(2, 0);

    SUBCASE("product state") {
        CHECK(partial_trace(projector(ket00), 2, 2, Subsystem::A) == projector(ket0));
        CHECK(partial_trace(projector(ket00), 2, 2, Subsystem::B) == projector(ket0));
    }
    SUBCASE("Bell projector is maximally mixed") {
        const ComplexMatrix bell = ComplexMatrix::column({kHalfRoot, 0, 0, kHalfRoot});
        const ComplexMatrix half_identity = 0.5 * ComplexMatrix::identity(2);
        CHECK(max_abs_diff(partial_trace(projector(bell), 2, 2, Subsystem::A), half_identity) < 1e-15);
        CHECK(max_abs_diff(partial_trace(projector(bell), 2, 2, Subsystem::B), half_identity) < 1e-15);
    }
    SUBCASE("uses A-major composite indexing") {
        // rho_A (x) rho_B with distinct factors must give each factor back.
        RngStream rng(15);
        const ComplexMatrix va = random_unit_vector(2, rng);
        const ComplexMatrix vb = random_unit_vector(3, rng);
        const ComplexMatrix rho = tensor_product(projector(va), projector(vb));
        CHECK(max_abs_diff(partial_trace(rho, 2, 3, Subsystem::A), projector(vb)) < 1e-14);
        CHECK(max_abs_diff(partial_trace(rho, 2, 3, Subsystem::B), projector(va)) < 1e-14);
    }
    SUBCASE("pure bipartite state: both reductions share their nonzero spectrum") {
        RngStream rng(16);
        for (const auto [da, db] : {std::pair{2, 2}, {2, 3}, {3, 2}, {4, 4}, {2, 4}}) {
            const ComplexMatrix psi = random_unit_vector(static_cast<std::size_t>(da * db), rng);
            const ComplexMatrix rho = projector(psi);
            const auto spec_a = nonzero_spectrum(partial_trace(rho, da, db, Subsystem::B));
            const auto spec_b = nonzero_spectrum(partial_trace(rho, da, db, Subsystem::A));
            REQUIRE(spec_a.size() == spec_b.size());
            REQUIRE(!spec_a.empty());
            for (std::size_t k = 0; k < spec_a.size(); ++k) {
                CHECK(spec_a[k] == doctest::Approx(spec_b[k]).epsilon(1e-10));
            }
        }
    }
    SUBCASE("side mismatch") {
        CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(5), 2, 2, Subsystem::A), DimensionError);
        CHECK_THROWS_AS(partial_trace(ComplexMatrix(4, 2), 2, 2, Subsystem::B), DimensionError);
    }
}

TEST_CASE("is_unitary") {
    CHECK(is_unitary(ComplexMatrix::identity(2)));
    CHECK(is_unitary(ComplexMatrix::from_rows({{kHalfRoot, kHalfRoot}, {kHalfRoot, -kHalfRoot}})));
    CHECK_FALSE(is_unitary(ComplexMatrix::from_rows({{1, 0}, {0, 2}})));
    CHECK_FALSE(is_unitary(ComplexMatrix(2, 3)));
    RngStream rng(17);
    CHECK(is_unitary(random_unitary(6, rng), Tolerance(1e-12)));
}

TEST_CASE("vector_norm") {
    CHECK(vector_norm(ComplexMatrix::basis_vector(2, 0)) == 1.0);
    CHECK(vector_norm(ComplexMatrix(3, 1)) == 0.0);
    CHECK(vector_norm(ComplexMatrix::column({1, 1})) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(vector_norm(ComplexMatrix(2, 2)), DimensionError);
}

TEST_CASE("algebraic invariants on random inputs") {
    RngStream rng(18);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(2 + trial % 4);
        const ComplexMatrix a = random_matrix(n, n, rng);
        const ComplexMatrix a2 = random_matrix(n, n, rng);
        const ComplexMatrix b = random_matrix(n + 1, n, rng);

        // bilinearity of the Kronecker product in its first slot
        CHECK(max_abs_diff(tensor_product(a + a2, b), tensor_product(a, b) + tensor_product(a2, b)) <
              1e-12);

        const ComplexMatrix c = random_matrix(n, n + 1, rng);
        CHECK(max_abs_diff(adjoint(matmul(a, c)), matmul(adjoint(c), adjoint(a))) < 1e-12);

        const std::size_t da = n;
        const std::size_t db = 2 + static_cast<std::size_t>(trial % 3);
        const ComplexMatrix h = random_hermitian(da * db, rng);
        CHECK(std::abs(trace(partial_trace(h, da, db, Subsystem::A)) - trace(h)) < 1e-12);

        const ComplexMatrix u = random_unitary(n, rng);
        REQUIRE(is_unitary(u, Tolerance(1e-10)));
        const ComplexMatrix v = random_matrix(n, 1, rng);
        CHECK(std::abs(vector_norm(matmul(u, v)) - vector_norm(v)) < 1e-10);
    }
}

TEST_CASE("parallel kernels agree with the serial reference") {
    RngStream rng(19);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 4}) {
        omp_set_num_threads(threads);
        CAPTURE(threads);
        const ComplexMatrix a = random_matrix(72, 64, rng);
        const ComplexMatrix b = random_matrix(64, 80, rng);
        CHECK(max_abs_diff(matmul(a, b), serial::matmul(a, b)) < 1e-11);

        const ComplexMatrix x = random_matrix(12, 10, rng);
        const ComplexMatrix y = random_matrix(16, 14, rng);
        CHECK(tensor_product(x, y) == serial::tensor_product(x, y));

        const ComplexMatrix rho = random_hermitian(8 * 24, rng);
        for (Subsystem over : {Subsystem::A, Subsystem::B}) {
            CHECK(max_abs_diff(partial_trace(rho, 8, 24, over), serial::partial_trace(rho, 8, 24, over)) <
                  1e-12);
        }
    }
    omp_set_num_threads(saved);
}
