#include "conjoint/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

namespace conjoint {

namespace {

using Json = nlohmann::ordered_json;

class Reader {
public:
    explicit Reader(std::vector<ParseDiagnostic>& out) : out_(out) {}

    void error(const std::string& path, std::string message,
               std::optional<double> residual = std::nullopt) {
        out_.push_back({Severity::Error, path, std::move(message), residual});
        failed_ = true;
    }
    void warning(const std::string& path, std::string message) {
        out_.push_back({Severity::Warning, path, std::move(message), std::nullopt});
    }
    [[nodiscard]] bool failed() const { return failed_; }

    bool expect_object(const Json& j, const std::string& path) {
        if (!j.is_object()) {
            error(path, "expected an object, got " + std::string(j.type_name()));
            return false;
        }
        return true;
    }

    void reject_unknown(const Json& j, const std::string& path, std::set<std::string> allowed) {
        for (const auto& [key, value] : j.items()) {
            if (!allowed.contains(key)) {
                error(join(path, key), "unknown field");
            }
        }
    }

    const Json* required(const Json& j, const std::string& path, const std::string& key) {
        auto it = j.find(key);
        if (it == j.end()) {
            error(join(path, key), "missing required field");
            return nullptr;
        }
        return &*it;
    }

    static const Json* optional(const Json& j, const std::string& key) {
        auto it = j.find(key);
        return it == j.end() ? nullptr : &*it;
    }

    std::optional<std::size_t> dimension(const Json& j, const std::string& path) {
        if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) {
            error(path, "expected a positive integer");
            return std::nullopt;
        }
        const auto dim = j.get<std::uint64_t>();
        if (dim > kMaxSubsystemDim) {
            error(path, "dimension exceeds " + std::to_string(kMaxSubsystemDim));
            return std::nullopt;
        }
        return static_cast<std::size_t>(dim);
    }

    std::optional<std::string> string(const Json& j, const std::string& path) {
        if (!j.is_string()) {
            error(path, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    std::optional<Complex> complex(const Json& j, const std::string& path) {
        if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
            error(path, "expected a complex number written as [re, im]");
            return std::nullopt;
        }
        const Complex z(j[0].get<double>(), j[1].get<double>());
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            error(path, "complex entry must be finite");
            return std::nullopt;
        }
        return z;
    }

    std::optional<std::vector<Complex>> complex_list(const Json& j, const std::string& path) {
        if (!j.is_array() || j.empty()) {
            error(path, "expected a non-empty array of [re, im] entries");
            return std::nullopt;
        }
        std::vector<Complex> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (auto z = complex(j[i], index(path, i))) {
                out.push_back(*z);
            } else {
                ok = false;
            }
        }
        if (!ok) {
            return std::nullopt;
        }
        return out;
    }

    std::optional<ComplexMatrix> column(const Json& j, const std::string& path,
                                        std::optional<std::size_t> expected_len) {
        auto values = complex_list(j, path);
        if (!values) {
            return std::nullopt;
        }
        if (expected_len && values->size() != *expected_len) {
            error(path, "expected " + std::to_string(*expected_len) + " entries, got " +
                            std::to_string(values->size()));
            return std::nullopt;
        }
        return ComplexMatrix::column(*values);
    }

    std::optional<ComplexMatrix> square_matrix(const Json& j, const std::string& path,
                                               std::optional<std::size_t> expected_side) {
        if (!j.is_array() || j.empty()) {
            error(path, "expected a non-empty array of rows");
            return std::nullopt;
        }
        const std::size_t side = j.size();
        std::vector<Complex> entries;
        bool ok = true;
        for (std::size_t r = 0; r < side; ++r) {
            auto row = complex_list(j[r], index(path, r));
            if (!row) {
                ok = false;
                continue;
            }
            if (row->size() != side) {
                error(index(path, r), "row has " + std::to_string(row->size()) +
                                          " entries, matrix must be " + std::to_string(side) + "x" +
                                          std::to_string(side));
                ok = false;
                continue;
            }
            entries.insert(entries.end(), row->begin(), row->end());
        }
        if (!ok) {
            return std::nullopt;
        }
        if (expected_side && side != *expected_side) {
            error(path, "expected a " + std::to_string(*expected_side) + "x" +
                            std::to_string(*expected_side) + " matrix, got " +
                            std::to_string(side) + "x" + std::to_string(side));
            return std::nullopt;
        }
        return ComplexMatrix(side, side, std::move(entries));
    }

    std::optional<MeasurementBasis> basis(const Json* j, const std::string& path,
                                          std::optional<std::size_t> dim) {
        if (j == nullptr || (j->is_string() && j->get<std::string>() == "standard")) {
            if (!dim) {
                return std::nullopt;
            }
            return MeasurementBasis::standard(*dim);
        }
        if (!j->is_array() || j->empty()) {
            error(path, "expected \"standard\" or an array of basis vectors");
            return std::nullopt;
        }
        MeasurementBasis out{j->size(), {}};
        bool ok = true;
        for (std::size_t i = 0; i < j->size(); ++i) {
            if (auto v = column((*j)[i], index(path, i), j->size())) {
                out.vectors.push_back(std::move(*v));
            } else {
                ok = false;
            }
        }
        if (!ok) {
            return std::nullopt;
        }
        if (dim && out.dim != *dim) {
            error(path, "basis has " + std::to_string(out.dim) + " vectors, subsystem dimension is " +
                            std::to_string(*dim));
            return std::nullopt;
        }
        return out;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }
    static std::string index(const std::string& path, std::size_t i) {
        return path + "[" + std::to_string(i) + "]";
    }

private:
    std::vector<ParseDiagnostic>& out_;
    bool failed_ = false;
};

// Tracks open containers during the SAX-style callback so duplicate keys can
// be reported with a path. Array elements appear as "[]".
class DuplicateKeyGuard {
public:
    explicit DuplicateKeyGuard(std::vector<std::string>& duplicates) : duplicates_(duplicates) {}

    bool operator()(int /*depth*/, nlohmann::json::parse_event_t event, Json& parsed) {
        using Event = nlohmann::json::parse_event_t;
        switch (event) {
            case Event::object_start:
                frames_.push_back({true, {}, path(), {}});
                break;
            case Event::array_start:
                frames_.push_back({false, {}, path() + "[]", {}});
                break;
            case Event::object_end:
            case Event::array_end:
                frames_.pop_back();
                break;
            case Event::key: {
                const auto key = parsed.get<std::string>();
                auto& frame = frames_.back();
                if (!frame.keys.insert(key).second) {
                    duplicates_.push_back(Reader::join(frame.base, key));
                }
                frame.current = key;
                break;
            }
            case Event::value:
                break;
        }
        return true;
    }

private:
    struct Frame {
        bool is_object;
        std::set<std::string> keys;
        std::string base;
        std::string current;
    };

    [[nodiscard]] std::string path() const {
        if (frames_.empty()) {
            return "";
        }
        const Frame& top = frames_.back();
        return top.is_object ? Reader::join(top.base, top.current) : top.base;
    }

    std::vector<Frame> frames_;
    std::vector<std::string>& duplicates_;
};

std::string location(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::optional<ScenarioDocument> read_document(const Json& root, Reader& in) {
    if (!in.expect_object(root, "")) {
        return std::nullopt;
    }
    in.reject_unknown(root, "", {"format_version", "metadata", "labels", "preparation", "evolution",
                                 "declared_local", "basis_a", "basis_b"});

    ScenarioDocument doc;
    if (root.empty() || root.begin().key() != "format_version") {
        in.error("format_version", "format_version must be present and the first field");
    }
    if (const Json* v = Reader::optional(root, "format_version")) {
        if (!v->is_number_integer() || v->get<std::int64_t>() != kFormatVersion) {
            in.error("format_version", "unsupported format version (expected 1)");
        }
    }

    if (const Json* meta = Reader::optional(root, "metadata")) {
        if (in.expect_object(*meta, "metadata")) {
            in.reject_unknown(*meta, "metadata", {"name", "description"});
            if (const Json* n = Reader::optional(*meta, "name")) {
                doc.name = in.string(*n, "metadata.name").value_or("");
            }
            if (const Json* d = Reader::optional(*meta, "description")) {
                doc.description = in.string(*d, "metadata.description").value_or("");
            }
        }
    } else {
        in.warning("metadata", "no metadata; the scenario has no name");
    }

    Scenario& s = doc.scenario;
    if (const Json* labels = Reader::optional(root, "labels")) {
        if (in.expect_object(*labels, "labels")) {
            in.reject_unknown(*labels, "labels", {"t_a", "t_b"});
            StageLabels l;
            if (const Json* t = in.required(*labels, "labels", "t_a")) {
                l.t_a = in.string(*t, "labels.t_a").value_or("");
            }
            if (const Json* t = in.required(*labels, "labels", "t_b")) {
                l.t_b = in.string(*t, "labels.t_b").value_or("");
            }
            s.labels = l;
        }
    }

    std::optional<std::size_t> dim_a;
    std::optional<std::size_t> dim_b;
    if (const Json* prep = in.required(root, "", "preparation"); prep != nullptr &&
                                                                 in.expect_object(*prep, "preparation")) {
        in.reject_unknown(*prep, "preparation", {"dim_a", "dim_b", "amplitudes", "conditional_states"});
        if (const Json* d = in.required(*prep, "preparation", "dim_a")) {
            dim_a = in.dimension(*d, "preparation.dim_a");
        }
        if (const Json* d = in.required(*prep, "preparation", "dim_b")) {
            dim_b = in.dimension(*d, "preparation.dim_b");
        }
        if (dim_a) {
            s.preparation.dim_a = *dim_a;
        }
        if (dim_b) {
            s.preparation.dim_b = *dim_b;
        }
        if (const Json* amps = in.required(*prep, "preparation", "amplitudes")) {
            if (auto values = in.complex_list(*amps, "preparation.amplitudes")) {
                if (dim_a && values->size() != *dim_a) {
                    in.error("preparation.amplitudes", "expected " + std::to_string(*dim_a) +
                                                           " amplitudes, got " +
                                                           std::to_string(values->size()));
                }
                s.preparation.amplitudes = std::move(*values);
            }
        }
        if (const Json* states = in.required(*prep, "preparation", "conditional_states")) {
            const std::string path = "preparation.conditional_states";
            if (!states->is_array() || (dim_a && states->size() != *dim_a)) {
                in.error(path, "expected an array of " +
                                   (dim_a ? std::to_string(*dim_a) : std::string("dim_a")) +
                                   " state vectors");
            } else {
                for (std::size_t i = 0; i < states->size(); ++i) {
                    if (auto chi = in.column((*states)[i], Reader::index(path, i), dim_b)) {
                        s.preparation.conditional_states.push_back(std::move(*chi));
                    }
                }
            }
        }
    }

    if (const Json* evo = in.required(root, "", "evolution"); evo != nullptr &&
                                                              in.expect_object(*evo, "evolution")) {
        in.reject_unknown(*evo, "evolution", {"kind", "operator"});
        std::optional<EvolutionKind> kind;
        if (const Json* k = in.required(*evo, "evolution", "kind")) {
            const auto name = in.string(*k, "evolution.kind");
            if (name == "local") {
                kind = EvolutionKind::Local;
            } else if (name == "joint") {
                kind = EvolutionKind::Joint;
            } else if (name) {
                in.error("evolution.kind", "expected \"local\" or \"joint\", got \"" + *name + "\"");
            }
        }
        if (const Json* op = in.required(*evo, "evolution", "operator"); op != nullptr && kind) {
            std::optional<std::size_t> side;
            if (dim_a && dim_b) {
                side = *kind == EvolutionKind::Local ? *dim_b : *dim_a * *dim_b;
            }
            if (auto m = in.square_matrix(*op, "evolution.operator", side)) {
                s.evolution = Evolution{*kind, std::move(*m)};
            }
        }
    }

    if (const Json* declared = Reader::optional(root, "declared_local")) {
        if (auto m = in.square_matrix(*declared, "declared_local", dim_b)) {
            s.declared_local = std::move(*m);
        }
    }

    if (auto b = in.basis(Reader::optional(root, "basis_a"), "basis_a", dim_a)) {
        s.basis_a = std::move(*b);
    }
    if (auto b = in.basis(Reader::optional(root, "basis_b"), "basis_b", dim_b)) {
        s.basis_b = std::move(*b);
    }

    if (in.failed()) {
        return std::nullopt;
    }
    return doc;
}

void write_complex(std::ostream& out, Complex z) {
    out << '[' << format_real(z.real()) << ", " << format_real(z.imag()) << ']';
}

void write_vector_line(std::ostream& out, std::span<const Complex> values) {
    out << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out << ", ";
        }
        write_complex(out, values[i]);
    }
    out << ']';
}

void write_string(std::ostream& out, const std::string& s) {
    out << Json(s).dump();
}

// Rows on their own lines at `indent`, closing bracket at indent - 2.
void write_rows(std::ostream& out, const std::vector<std::vector<Complex>>& rows, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    out << "[\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << pad;
        write_vector_line(out, rows[r]);
        out << (r + 1 < rows.size() ? ",\n" : "\n");
    }
    out << std::string(static_cast<std::size_t>(indent - 2), ' ') << ']';
}

std::vector<std::vector<Complex>> matrix_rows(const ComplexMatrix& m) {
    std::vector<std::vector<Complex>> rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows.emplace_back(m.entries().begin() + static_cast<std::ptrdiff_t>(r * m.cols()),
                          m.entries().begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols()));
    }
    return rows;
}

std::vector<std::vector<Complex>> column_rows(const std::vector<ComplexMatrix>& columns) {
    std::vector<std::vector<Complex>> rows;
    for (const auto& c : columns) {
        rows.emplace_back(c.entries().begin(), c.entries().end());
    }
    return rows;
}

void write_basis(std::ostream& out, const MeasurementBasis& basis) {
    if (basis.is_standard()) {
        out << "\"standard\"";
    } else {
        write_rows(out, column_rows(basis.vectors), 4);
    }
}

}  // namespace

std::string format_real(double x) {
    if (x == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

ParseResult parse_scenario(std::string_view text, Tolerance tol) {
    ParseResult result;
    std::vector<std::string> duplicates;
    Json root;
    try {
        root = Json::parse(text.begin(), text.end(), DuplicateKeyGuard(duplicates),
                           /*allow_exceptions=*/true, /*ignore_comments=*/false);
    } catch (const nlohmann::json::parse_error& e) {
        std::string what = e.what();
        // Drop nlohmann's "[json.exception.parse_error.101] parse error at ..." prefix.
        if (const auto colon = what.find(": "); colon != std::string::npos) {
            what = what.substr(colon + 2);
        }
        result.diagnostics.push_back(
            {Severity::Error, "", "syntax error at " + location(text, e.byte) + ": " + what,
             std::nullopt});
        return result;
    }

    Reader in(result.diagnostics);
    for (const auto& path : duplicates) {
        in.error(path, "duplicate field");
    }
    auto doc = read_document(root, in);
    if (!doc || in.failed()) {
        return result;
    }

    const ValidationReport report = validate_scenario(doc->scenario, tol);
    for (const auto& v : report.violations) {
        result.diagnostics.push_back({Severity::Error, v.path, v.message, v.residual});
    }
    if (report.ok()) {
        result.document = std::move(doc);
    }
    return result;
}

std::string write_scenario(const ScenarioDocument& doc) {
    const Scenario& s = doc.scenario;
    std::ostringstream out;
    out << "{\n";
    out << "  \"format_version\": " << doc.format_version << ",\n";
    out << "  \"metadata\": {\n    \"name\": ";
    write_string(out, doc.name);
    out << ",\n    \"description\": ";
    write_string(out, doc.description);
    out << "\n  },\n";
    if (s.labels) {
        out << "  \"labels\": {\n    \"t_a\": ";
        write_string(out, s.labels->t_a);
        out << ",\n    \"t_b\": ";
        write_string(out, s.labels->t_b);
        out << "\n  },\n";
    }
    out << "  \"preparation\": {\n";
    out << "    \"dim_a\": " << s.preparation.dim_a << ",\n";
    out << "    \"dim_b\": " << s.preparation.dim_b << ",\n";
    out << "    \"amplitudes\": ";
    write_vector_line(out, s.preparation.amplitudes);
    out << ",\n    \"conditional_states\": ";
    write_rows(out, column_rows(s.preparation.conditional_states), 6);
    out << "\n  },\n";
    out << "  \"evolution\": {\n    \"kind\": \""
        << (s.evolution.kind == EvolutionKind::Local ? "local" : "joint")
        << "\",\n    \"operator\": ";
    write_rows(out, matrix_rows(s.evolution.op), 6);
    out << "\n  },\n";
    if (s.declared_local) {
        out << "  \"declared_local\": ";
        write_rows(out, matrix_rows(*s.declared_local), 4);
        out << ",\n";
    }
    out << "  \"basis_a\": ";
    write_basis(out, s.basis_a);
    out << ",\n  \"basis_b\": ";
    write_basis(out, s.basis_b);
    out << "\n}\n";
    return out.str();
}

}  // namespace conjoint
