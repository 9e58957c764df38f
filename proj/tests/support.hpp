#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conjoint/complex_matrix.hpp"
#include "conjoint/rng.hpp"
#include "conjoint/scenario_io.hpp"

namespace conjoint::testing {

inline const double kHalfRoot = 1.0 / std::sqrt(2.0);

inline std::filesystem::path fixture(const std::string& stem) {
    return std::filesystem::path(CONJOINT_FIXTURE_DIR) / (stem + ".scenario");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ScenarioDocument load_fixture(const std::string& stem) {
    ParseResult result = parse_scenario(read_file(fixture(stem)));
    if (!result.ok()) {
        throw std::runtime_error("fixture " + stem + " failed to parse");
    }
    return *result.document;
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
    ComplexMatrix m(rows, cols);
    for (auto& z : m.entries()) {
        z = {rng.next_normal(), rng.next_normal()};
    }
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, RngStream& rng) {
    ComplexMatrix m = random_matrix(n, n, rng);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    return h;
}

/// Eigenvalues of a Hermitian matrix, ascending, computed by Eigen.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    const auto& values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

/// Eigenvalues above `floor`, sorted descending.
inline std::vector<double> nonzero_spectrum(const ComplexMatrix& m, double floor = 1e-9) {
    std::vector<double> values = hermitian_eigenvalues(m);
    std::erase_if(values, [&](double v) { return v <= floor; });
    std::sort(values.rbegin(), values.rend());
    return values;
}

inline std::vector<double> split_csv_line(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
        if (!first && !cell.empty()) {
            out.push_back(std::stod(cell));
        }
        first = false;
    }
    return out;
}

}  // namespace conjoint::testing
