#include "conjoint/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "conjoint/oracle.hpp"
#include "conjoint/probability.hpp"
#include "conjoint/scenario_io.hpp"

namespace conjoint::cli {

namespace {

constexpr const char* kMasked = "—";

struct Loaded {
    std::optional<ScenarioDocument> doc;
    CommandOutcome failure;
};

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string render_diagnostics(const std::vector<ParseDiagnostic>& diags) {
    std::ostringstream out;
    for (const auto& d : diags) {
        out << to_string(d.severity) << "  " << (d.path.empty() ? "<root>" : d.path) << "  "
            << d.message;
        if (d.residual) {
            out << "  (residual " << format_real(*d.residual) << ")";
        }
        out << '\n';
    }
    return out.str();
}

Loaded load(const std::string& path, const Options& opts) {
    Loaded loaded;
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        loaded.failure = {kUsageError, "", "cannot read scenario file: " + path + "\n"};
        return loaded;
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    ParseResult result = parse_scenario(buffer.str(), opts.tol);
    if (!result.ok()) {
        loaded.failure = {kValidationFailure, "",
                          path + ": invalid scenario\n" + render_diagnostics(result.diagnostics)};
        return loaded;
    }
    loaded.failure.err = render_diagnostics(result.diagnostics);
    loaded.doc = std::move(result.document);
    return loaded;
}

// Every command body runs through here so numerical failures map to exit 3
// and nothing is printed unless the whole rendering succeeded.
CommandOutcome guarded(const std::string& path, const Options& opts,
                       const std::function<std::string(const ScenarioDocument&)>& body) {
    Loaded loaded = load(path, opts);
    if (!loaded.doc) {
        return loaded.failure;
    }
    try {
        return {kSuccess, body(*loaded.doc), loaded.failure.err};
    } catch (const ValidationError& e) {
        return {kValidationFailure, "", loaded.failure.err + e.what()};
    } catch (const NumericalError& e) {
        return {kNumericalFailure, "", loaded.failure.err + "numerical failure: " + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {kNumericalFailure, "", loaded.failure.err + "internal failure: " + e.what() + "\n"};
    }
}

JointTable complete_joint(const ScenarioDocument& doc, const Options& opts) {
    const Scenario& s = doc.scenario;
    return joint_distribution(assemble_complete_state(s.preparation, opts.tol), s.evolution,
                              s.basis_a, s.basis_b, opts.tol);
}

std::string pad_left(const std::string& s, std::size_t width) {
    // Width counts code points so the em dash lines up.
    std::size_t visible = 0;
    for (unsigned char c : s) {
        visible += (c & 0xC0) != 0x80 ? 1 : 0;
    }
    return visible >= width ? s : std::string(width - visible, ' ') + s;
}

using CellFn = std::function<std::string(std::size_t a, std::size_t b)>;

void text_grid(std::ostringstream& out, std::size_t dim_a, std::size_t dim_b, const CellFn& cell,
               const std::vector<double>* row_margin, const std::vector<double>* col_margin,
               const std::string& row_margin_label, const std::string& col_margin_label) {
    constexpr std::size_t kLabel = 8;
    constexpr std::size_t kCell = 9;
    out << pad_left("", kLabel);
    for (std::size_t b = 0; b < dim_b; ++b) {
        out << pad_left("b=" + std::to_string(b), kCell);
    }
    if (row_margin != nullptr) {
        out << pad_left(row_margin_label, kCell + 2);
    }
    out << '\n';
    for (std::size_t a = 0; a < dim_a; ++a) {
        std::string label = "a=" + std::to_string(a);
        out << label << std::string(kLabel - label.size(), ' ');
        for (std::size_t b = 0; b < dim_b; ++b) {
            out << pad_left(cell(a, b), kCell);
        }
        if (row_margin != nullptr) {
            out << pad_left(fixed4((*row_margin)[a]), kCell + 2);
        }
        out << '\n';
    }
    if (col_margin != nullptr) {
        out << col_margin_label << std::string(kLabel > col_margin_label.size()
                                                   ? kLabel - col_margin_label.size()
                                                   : 0,
                                               ' ');
        for (std::size_t b = 0; b < dim_b; ++b) {
            out << pad_left(fixed4((*col_margin)[b]), kCell);
        }
        out << '\n';
    }
}

std::string title(const ScenarioDocument& doc, const std::string& what) {
    return what + (doc.name.empty() ? "" : "  [" + doc.name + "]") + "\n";
}

std::string render_joint(const ScenarioDocument& doc, const JointTable& jt, Format format) {
    const auto pa = marginal_a(jt);
    const auto pb = marginal_b(jt);
    std::ostringstream out;
    if (format == Format::Csv) {
        for (std::size_t b = 0; b < jt.dim_b(); ++b) {
            out << ",b=" << b;
        }
        out << ",p(A=a)\n";
        for (std::size_t a = 0; a < jt.dim_a(); ++a) {
            out << "a=" << a;
            for (std::size_t b = 0; b < jt.dim_b(); ++b) {
                out << ',' << format_real(jt(a, b));
            }
            out << ',' << format_real(pa[a]) << '\n';
        }
        out << "p(B=b)";
        for (double x : pb) {
            out << ',' << format_real(x);
        }
        out << ",\n";
        return out.str();
    }
    out << title(doc, "joint distribution p(A=a, B=b)");
    text_grid(out, jt.dim_a(), jt.dim_b(), [&](std::size_t a, std::size_t b) { return fixed4(jt(a, b)); },
              &pa, &pb, "p(A=a)", "p(B=b)");
    return out.str();
}

std::string render_conditional(const ScenarioDocument& doc, const ConditionalTable& t,
                               Format format) {
    const bool predictive = t.direction == Direction::Predictive;
    std::ostringstream out;
    if (format == Format::Csv) {
        for (std::size_t b = 0; b < t.dim_b; ++b) {
            out << ",b=" << b;
        }
        out << '\n';
        for (std::size_t a = 0; a < t.dim_a; ++a) {
            out << "a=" << a;
            for (std::size_t b = 0; b < t.dim_b; ++b) {
                const auto v = t.at(a, b);
                out << ',' << (v ? format_real(*v) : "");
            }
            out << '\n';
        }
        return out.str();
    }
    out << title(doc, predictive ? "predictive conditional p(B=b | A=a)"
                                 : "retrodictive conditional p(A=a | B=b)");
    text_grid(
        out, t.dim_a, t.dim_b,
        [&](std::size_t a, std::size_t b) {
            const auto v = t.at(a, b);
            return v ? fixed4(*v) : std::string(kMasked);
        },
        nullptr, nullptr, "", "");
    for (std::size_t k = 0; k < t.support.size(); ++k) {
        if (!t.support[k]) {
            out << kMasked << " undefined: " << (predictive ? "p(A=" : "p(B=") << k
                << ") = 0, " << (predictive ? "row a=" : "column b=") << k
                << " has no conditional\n";
        }
    }
    return out.str();
}

}  // namespace

CommandOutcome cmd_validate(const std::string& path, const Options& opts) {
    Loaded loaded = load(path, opts);
    if (!loaded.doc) {
        return loaded.failure;
    }
    return {kSuccess, "OK\n", loaded.failure.err};
}

CommandOutcome cmd_joint(const std::string& path, const Options& opts) {
    return guarded(path, opts, [&](const ScenarioDocument& doc) {
        return render_joint(doc, complete_joint(doc, opts), opts.format);
    });
}

CommandOutcome cmd_predict(const std::string& path, const Options& opts) {
    return guarded(path, opts, [&](const ScenarioDocument& doc) {
        return render_conditional(doc, conditional(complete_joint(doc, opts), Direction::Predictive),
                                  opts.format);
    });
}

CommandOutcome cmd_retrodict(const std::string& path, const Options& opts) {
    return guarded(path, opts, [&](const ScenarioDocument& doc) {
        return render_conditional(
            doc, conditional(complete_joint(doc, opts), Direction::Retrodictive), opts.format);
    });
}

CommandOutcome cmd_compare(const std::string& path, const Options& opts) {
    return guarded(path, opts, [&](const ScenarioDocument& doc) {
        const DivergenceReport report = divergence_report(doc.scenario, opts.tol);
        std::ostringstream out;
        const auto& conv = report.conventional_joint;
        const auto& full = report.complete_joint;
        if (opts.format == Format::Csv) {
            out << "table,a,b,p\n";
            for (const auto* t : {&conv, &full}) {
                const char* name = t == &conv ? "conventional" : "complete";
                for (std::size_t a = 0; a < t->dim_a(); ++a) {
                    for (std::size_t b = 0; b < t->dim_b(); ++b) {
                        out << name << ',' << a << ',' << b << ',' << format_real((*t)(a, b))
                            << '\n';
                    }
                }
            }
            out << "total_variation,,," << format_real(report.total_variation) << '\n';
            out << "max_entry_gap,,," << format_real(report.max_entry_gap) << '\n';
            return out.str();
        }
        out << title(doc, "conventional vs complete joint distribution");
        std::ostringstream left;
        std::ostringstream right;
        text_grid(left, conv.dim_a(), conv.dim_b(),
                  [&](std::size_t a, std::size_t b) { return fixed4(conv(a, b)); }, nullptr,
                  nullptr, "", "");
        text_grid(right, full.dim_a(), full.dim_b(),
                  [&](std::size_t a, std::size_t b) { return fixed4(full(a, b)); }, nullptr,
                  nullptr, "", "");
        std::vector<std::string> left_lines;
        std::vector<std::string> right_lines;
        {
            std::istringstream l(left.str());
            for (std::string line; std::getline(l, line);) {
                left_lines.push_back(line);
            }
            std::istringstream r(right.str());
            for (std::string line; std::getline(r, line);) {
                right_lines.push_back(line);
            }
        }
        const std::string head_l = "conventional (mixture, declared V_B)";
        std::size_t width = head_l.size();
        for (const auto& line : left_lines) {
            width = std::max(width, line.size());
        }
        width += 4;
        out << head_l << std::string(width - head_l.size(), ' ')
            << "complete (entangled experimenter)\n";
        for (std::size_t k = 0; k < left_lines.size() && k < right_lines.size(); ++k) {
            out << left_lines[k] << std::string(width - left_lines[k].size(), ' ')
                << right_lines[k] << '\n';
        }
        out << "total_variation  " << fixed4(report.total_variation) << '\n';
        out << "max_entry_gap    " << fixed4(report.max_entry_gap) << '\n';
        return out.str();
    });
}

CommandOutcome cmd_sample(const std::string& path, const Options& opts) {
    if (!opts.n || *opts.n == 0) {
        return {kUsageError, "", "sample: --n must be given and at least 1\n"};
    }
    return guarded(path, opts, [&](const ScenarioDocument& doc) {
        const JointTable exact = complete_joint(doc, opts);
        const SampleRun run = sample_joint(doc.scenario, *opts.n, opts.seed, opts.tol);
        const JointTable freq = run.frequencies();
        const double tv = tv_distance(freq, exact);
        std::ostringstream out;
        if (opts.format == Format::Csv) {
            out << "a,b,count,frequency,exact\n";
            for (std::size_t a = 0; a < run.dim_a; ++a) {
                for (std::size_t b = 0; b < run.dim_b; ++b) {
                    out << a << ',' << b << ',' << run(a, b) << ',' << format_real(freq(a, b))
                        << ',' << format_real(exact(a, b)) << '\n';
                }
            }
            out << "tv_distance,,,," << format_real(tv) << '\n';
            return out.str();
        }
        out << title(doc, "sampled joint distribution");
        out << "n=" << run.n << "  seed=" << run.seed << "  rng=" << RngStream::kAlgorithm << '\n';
        out << "counts\n";
        text_grid(out, run.dim_a, run.dim_b,
                  [&](std::size_t a, std::size_t b) { return std::to_string(run(a, b)); }, nullptr,
                  nullptr, "", "");
        out << "frequencies\n";
        text_grid(out, run.dim_a, run.dim_b,
                  [&](std::size_t a, std::size_t b) { return fixed4(freq(a, b)); }, nullptr,
                  nullptr, "", "");
        char tv_buf[32];
        std::snprintf(tv_buf, sizeof tv_buf, "%.6f", tv);
        out << "tv_distance  " << tv_buf << '\n';
        return out.str();
    });
}

CommandOutcome run(const std::vector<std::string>& args) {
    CLI::App app{"Measurement statistics for experimenter-system scenarios", "conjoint"};
    app.require_subcommand(1);

    std::string path;
    std::string format = "text";
    double eps = Tolerance::kStructural;
    std::uint64_t n = 0;
    std::uint64_t seed = kDefaultSeed;

    const auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("path", path, "scenario file")->required();
        sub->add_option("--format", format, "text or csv")
            ->check(CLI::IsMember({"text", "csv"}));
        sub->add_option("--eps", eps, "validation tolerance (default 1e-10)");
        return sub;
    };
    add("validate", "parse and validate a scenario");
    add("joint", "joint distribution p(a,b) with marginals");
    add("predict", "predictive conditional p(b|a)");
    add("retrodict", "retrodictive conditional p(a|b)");
    add("compare", "conventional vs complete description");
    CLI::App* sample = add("sample", "Monte Carlo draws from the joint distribution");
    sample->add_option("--n", n, "number of draws");
    sample->add_option("--seed", seed, "seed")->capture_default_str();

    std::ostringstream out;
    std::ostringstream err;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return {code == 0 ? kSuccess : kUsageError, out.str(), err.str()};
    }

    Options opts;
    opts.format = format == "csv" ? Format::Csv : Format::Text;
    try {
        opts.tol = Tolerance(eps);
    } catch (const std::invalid_argument& e) {
        return {kUsageError, "", std::string("--eps: ") + e.what() + "\n"};
    }
    opts.seed = seed;
    if (n > 0) {
        opts.n = n;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "validate") return cmd_validate(path, opts);
    if (cmd == "joint") return cmd_joint(path, opts);
    if (cmd == "predict") return cmd_predict(path, opts);
    if (cmd == "retrodict") return cmd_retrodict(path, opts);
    if (cmd == "compare") return cmd_compare(path, opts);
    return cmd_sample(path, opts);
}

}  // namespace conjoint::cli
