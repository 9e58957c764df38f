#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conjoint {

using Complex = std::complex<double>;

/// Raised when operand shapes do not fit an operation.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation produced a non-finite value or a structural
/// check failed in a way that no input validation could have caught.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Validation tolerance. Must satisfy 0 < eps < 1e-3.
class Tolerance {
public:
    static constexpr double kStructural = 1e-10;
    static constexpr double kArithmetic = 1e-12;

    constexpr Tolerance() = default;
    explicit Tolerance(double eps);

    [[nodiscard]] constexpr double eps() const noexcept { return eps_; }

private:
    double eps_ = kStructural;
};

/// Dense, row-major complex matrix. Column vectors are n x 1 matrices.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    /// Zero-filled rows x cols matrix; both must be positive.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Takes ownership of row-major entries; throws on size mismatch or
    /// non-finite entries.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    static ComplexMatrix column(std::span<const Complex> values);
    static ComplexMatrix column(std::initializer_list<Complex> values);
    /// e_index in C^dim, as a column.
    static ComplexMatrix basis_vector(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_ && rows_ > 0; }
    [[nodiscard]] bool is_column() const noexcept { return cols_ == 1 && rows_ > 0; }
    [[nodiscard]] bool all_finite() const noexcept;

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Complex& operator[](std::size_t flat) { return data_[flat]; }
    const Complex& operator[](std::size_t flat) const { return data_[flat]; }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }
    [[nodiscard]] std::span<Complex> entries() noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// "RxC" for diagnostics.
std::string shape_string(const ComplexMatrix& m);

/// Largest |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace conjoint
