// Regenerates the golden .scenario fixtures in canonical form.
//
//   conjoint-fixtures <output-dir>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "conjoint/cli.hpp"
#include "conjoint/linalg.hpp"
#include "conjoint/random_scenario.hpp"
#include "conjoint/scenario_io.hpp"

using namespace conjoint;

namespace {

const double kHalfRoot = 1.0 / std::sqrt(2.0);

Preparation two_outcome(ComplexMatrix chi0, ComplexMatrix chi1) {
    return Preparation{2, 2, {kHalfRoot, kHalfRoot}, {std::move(chi0), std::move(chi1)}};
}

ComplexMatrix ket0() { return ComplexMatrix::basis_vector(2, 0); }
ComplexMatrix ket1() { return ComplexMatrix::basis_vector(2, 1); }
ComplexMatrix ket_plus() { return ComplexMatrix::column({kHalfRoot, kHalfRoot}); }

ComplexMatrix hadamard() {
    return ComplexMatrix::from_rows({{kHalfRoot, kHalfRoot}, {kHalfRoot, -kHalfRoot}});
}

ComplexMatrix controlled_flip() {
    return ComplexMatrix::from_rows(
        {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
}

Scenario local(Preparation prep, ComplexMatrix v_b) {
    Scenario s;
    const std::size_t dim_a = prep.dim_a;
    const std::size_t dim_b = prep.dim_b;
    s.preparation = std::move(prep);
    s.evolution = Evolution::local(std::move(v_b));
    s.basis_a = MeasurementBasis::standard(dim_a);
    s.basis_b = MeasurementBasis::standard(dim_b);
    return s;
}

Scenario joint(Preparation prep, ComplexMatrix u_ab, ComplexMatrix declared) {
    Scenario s = local(std::move(prep), ComplexMatrix::identity(2));
    s.evolution = Evolution::joint(std::move(u_ab));
    s.declared_local = std::move(declared);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: conjoint-fixtures <output-dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    std::vector<std::pair<std::string, ScenarioDocument>> docs;

    Scenario bell = local(two_outcome(ket0(), ket1()), ComplexMatrix::identity(2));
    bell.labels = StageLabels{"preparation", "measurement"};
    docs.push_back({"bell", {kFormatVersion, "bell",
                             "two equally weighted orthogonal preparations, no evolution",
                             bell}});

    docs.push_back({"single-outcome",
                    {kFormatVersion, "single-outcome", "one preparation outcome, system left in |0>",
                     local(Preparation{1, 2, {1.0}, {ket0()}}, ComplexMatrix::identity(2))}});

    docs.push_back({"non-orthogonal",
                    {kFormatVersion, "non-orthogonal",
                     "outcome 0 leaves |0>, outcome 1 leaves |+>; conditional states overlap",
                     local(two_outcome(ket0(), ket_plus()), ComplexMatrix::identity(2))}});

    docs.push_back({"cnot-interaction",
                    {kFormatVersion, "cnot-interaction",
                     "system flips the experimenter record after preparation; "
                     "conventional description assumes nothing happens",
                     joint(two_outcome(ket0(), ket1()), controlled_flip(),
                           ComplexMatrix::identity(2))}});

    docs.push_back({"embedded-local-joint",
                    {kFormatVersion, "embedded-local-joint",
                     "I (x) H written as a joint operator; no experimenter-system interaction",
                     joint(two_outcome(ket0(), ket_plus()),
                           tensor_product(ComplexMatrix::identity(2), hadamard()), hadamard())}});

    RngStream rng(cli::kDefaultSeed);
    docs.push_back({"random-seeded",
                    {kFormatVersion, "random-seeded",
                     "random 3x4 joint scenario from RngStream seed 20240521",
                     random_joint_scenario(3, 4, rng)}});

    for (const auto& [stem, doc] : docs) {
        std::ofstream out(dir / (stem + ".scenario"), std::ios::binary);
        out << write_scenario(doc);
    }
    return 0;
}
