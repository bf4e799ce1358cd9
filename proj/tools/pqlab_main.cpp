// pqlab: experiment CLI around the (p,q)-operator library.
// Subcommands: moments, bound-check, korovkin, voronovskaja, integrate.
// Each reads a JSON config, writes a CSV table plus a JSON sidecar with the
// fully resolved configuration, and exits 0 (ok) / 2 (validation) /
// 3 (numerical failure).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pqlab/analysis.hpp"
#include "pqlab/config.hpp"
#include "pqlab/csv.hpp"
#include "pqlab/errors.hpp"
#include "pqlab/expr.hpp"
#include "pqlab/integrate.hpp"
#include "pqlab/operators.hpp"
#include "pqlab/version.hpp"

namespace {

using namespace pqlab;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

scalar_fn make_fn(const run_config& rc) {
    if (!rc.function) throw validation_error("this command requires a function{expr}");
    return parse_function(rc.function->expr).to_scalar_fn();
}

csv_table run_moments(const run_config& rc) {
    csv_table t;
    if (rc.function) {
        const scalar_fn f = make_fn(rc);
        const operator_config cfg = rc.make_operator_config();
        t.header = {"x", "t_f"};
        for (int i = 0; i < rc.g.points; ++i) {
            const double x = rc.g.at(i);
            t.rows.push_back({format_double(x), format_double(operator_apply(f, x, cfg))});
        }
        return t;
    }
    // no function: cross-check the closed-form moments against direct evaluation
    const operator_config cfg = rc.make_operator_config();
    t.header = {"x", "m1_closed", "m1_direct", "m2_closed", "m2_direct", "rel_err"};
    const scalar_fn ft([](double u) { return u; }, growth_tag::polynomial, 1);
    const scalar_fn ft2([](double u) { return u * u; }, growth_tag::polynomial, 2);
    for (int i = 0; i < rc.g.points; ++i) {
        const double x = rc.g.at(i);
        const double m1c = moment_m1(x, cfg);
        const double m1d = operator_apply(ft, x, cfg);
        const double m2c = moment_m2(x, cfg);
        const double m2d = operator_apply(ft2, x, cfg);
        const double rel = std::max(std::abs(m1c - m1d) / std::max(1.0, std::abs(m1d)),
                                    std::abs(m2c - m2d) / std::max(1.0, std::abs(m2d)));
        t.rows.push_back({format_double(x), format_double(m1c), format_double(m1d),
                          format_double(m2c), format_double(m2d), format_double(rel)});
    }
    return t;
}

csv_table run_bound_check(const run_config& rc) {
    const scalar_fn f = make_fn(rc);
    const operator_config cfg = rc.make_operator_config();
    csv_table t;
    t.header = {"x", "f_x", "t_f_x", "abs_err", "bound", "dominated"};
    for (int i = 0; i < rc.g.points; ++i) {
        const double x = rc.g.at(i);
        const double fx = f(x);
        const double tf = operator_apply(f, x, cfg);
        const double err = std::abs(tf - fx);
        const double b = theorem2_bound(f, x, cfg, rc.g);
        t.rows.push_back({format_double(x), format_double(fx), format_double(tf),
                          format_double(err), format_double(b), err <= b ? "1" : "0"});
    }
    return t;
}

csv_table run_korovkin(const run_config& rc) {
    // the Korovkin experiment defaults to the printed closed forms
    const moment_form form = rc.form_explicit.value_or(moment_form::printed);
    const auto rows = korovkin_table(rc.scheme, rc.ns, rc.alpha, rc.beta, rc.g, form);
    csv_table t;
    t.header = {"n", "p_n", "q_n", "norm_i0", "norm_i1", "norm_i2"};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.n), format_double(r.p_n), format_double(r.q_n),
                          format_double(r.col("norm_i0")), format_double(r.col("norm_i1")),
                          format_double(r.col("norm_i2"))});
    return t;
}

csv_table run_voronovskaja(const run_config& rc) {
    if (!rc.function || !rc.function->d1 || !rc.function->d2)
        throw validation_error("voronovskaja requires function{expr,d1,d2}");
    const auto fs = parse_function(rc.function->expr, rc.function->d1, rc.function->d2);
    const auto rows = voronovskaja_table(
        fs.to_scalar_fn(growth_tag::polynomial, 2), fs.deriv1(), fs.deriv2(), rc.scheme,
        rc.ns, rc.alpha, rc.beta, rc.xs, /*classical=*/false, rc.quad);
    csv_table t;
    t.header = {"n", "x", "p_n", "q_n", "lhs", "A_n", "B_n", "rhs", "err"};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.n), format_double(r.col("x")),
                          format_double(r.p_n), format_double(r.q_n),
                          format_double(r.col("lhs")), format_double(r.col("A_n")),
                          format_double(r.col("B_n")), format_double(r.col("rhs")),
                          format_double(r.col("err"))});
    return t;
}

csv_table run_integrate(const run_config& rc) {
    const scalar_fn f = make_fn(rc);
    csv_table t;
    t.header = {"kind", "p", "q", "upper", "value"};
    double v = 0.0;
    if (rc.integrate.kind == "finite")
        v = jackson_finite(f.f, rc.integrate.upper, rc.pq, rc.quad);
    else if (rc.integrate.kind == "improper")
        v = jackson_improper(f.f, rc.pq, rc.quad);
    else
        v = classical_improper(f.f, rc.quad);
    t.rows.push_back({rc.integrate.kind, format_double(rc.pq.p), format_double(rc.pq.q),
                      format_double(rc.integrate.upper), format_double(v)});
    return t;
}

csv_table dispatch(const std::string& command, const run_config& rc) {
    if (command == "moments") return run_moments(rc);
    if (command == "bound-check") return run_bound_check(rc);
    if (command == "korovkin") return run_korovkin(rc);
    if (command == "voronovskaja") return run_voronovskaja(rc);
    if (command == "integrate") return run_integrate(rc);
    throw validation_error("unknown command " + command);
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_override, bool seed_check) {
    run_config rc = load_run_config(read_file(config_path));
    if (!out_override.empty()) rc.output = out_override;

    const csv_table table = dispatch(command, rc);
    const std::string csv = table.render();
    write_file_atomic(rc.output, csv);

    const std::filesystem::path sidecar(rc.output + ".meta.json");
    write_file_atomic(sidecar, render_resolved_config(rc, command, version_string()));

    if (seed_check) {
        const std::string again = dispatch(command, rc).render();
        if (again != csv) {
            std::cerr << "pqlab: seed-check failed: recomputed output differs\n";
            return 3;
        }
        std::cerr << "pqlab: seed-check ok (byte-identical recompute)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pqlab: (p,q)-operator experiments"};
    app.set_version_flag("--version", pqlab::version_string());
    app.require_subcommand(1);

    std::string config_path, out_override;
    bool seed_check = false;
    for (const char* name :
         {"moments", "bound-check", "korovkin", "voronovskaja", "integrate"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config path")->required();
        sub->add_option("--out", out_override, "override output CSV path");
        sub->add_flag("--seed-check", seed_check,
                      "recompute and verify the output is byte-identical");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run_command(command, config_path, out_override, seed_check);
    } catch (const pqlab::validation_error& e) {
        std::cerr << "pqlab: " << e.what() << "\n";
        return 2;
    } catch (const pqlab::numeric_error& e) {
        std::cerr << "pqlab: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "pqlab: " << e.what() << "\n";
        return 2;
    }
}
