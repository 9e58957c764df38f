#include "conjoint/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace conjoint {

Tolerance::Tolerance(double eps) : eps_(eps) {
    if (!(eps > 0.0 && eps < 1e-3)) {
        throw std::invalid_argument("tolerance eps must satisfy 0 < eps < 1e-3, got " +
                                    std::to_string(eps));
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    }
    if (data_.size() != rows * cols) {
        throw DimensionError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " needs " + std::to_string(rows * cols) + " entries, got " +
                             std::to_string(data_.size()));
    }
    if (!all_finite()) {
        throw NumericalError("matrix entries must be finite");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionError("ragged row in matrix literal");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(data));
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> values) {
    return ComplexMatrix(values.size(), 1, std::vector<Complex>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::column(std::initializer_list<Complex> values) {
    return ComplexMatrix(values.size(), 1, std::vector<Complex>(values));
}

ComplexMatrix ComplexMatrix::basis_vector(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("basis index " + std::to_string(index) + " out of range for dim " +
                             std::to_string(dim));
    }
    ComplexMatrix v(dim, 1);
    v[index] = 1.0;
    return v;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("cannot add " + shape_string(*this) + " and " + shape_string(other));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("cannot subtract " + shape_string(other) + " from " +
                             shape_string(*this));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) {
        z *= scale;
    }
    return *this;
}

std::string shape_string(const ComplexMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("cannot compare " + shape_string(a) + " with " + shape_string(b));
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

}  // namespace conjoint
