#pragma once

// Experiment configuration: a JSON file with top-level keys
//   n, p, q, alpha, beta, trunc{abs_tol,max_terms,consecutive},
//   quad{node_budget,abs_tol}, grid{x_min,x_max,points}, scheme{c_p,c_q},
//   ns[], xs[], function{expr,d1,d2}, form, integrate{kind,upper}, output.
// Everything has a documented default; all structural invariants are
// re-validated on load.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pqlab/analysis.hpp"
#include "pqlab/errors.hpp"
#include "pqlab/expr.hpp"
#include "pqlab/operators.hpp"

namespace pqlab {

struct function_config {
    std::string expr;
    std::optional<std::string> d1;
    std::optional<std::string> d2;
};

struct integrate_config {
    std::string kind = "improper";  // finite | improper | classical
    double upper = 1.0;             // for kind == finite
};

struct run_config {
    int n = 8;
    pq_pair pq{0.95, 0.9};
    double alpha = 0.0;
    double beta = 0.0;
    truncation trunc{};
    quad_config quad{};
    grid g{};
    sequence_scheme scheme{};
    std::vector<int> ns{8, 16, 32, 64};
    std::vector<double> xs{0.5, 1.0, 2.0};
    std::optional<function_config> function;
    moment_form form = moment_form::validated;
    std::optional<moment_form> form_explicit;  // set only when the file names it
    integrate_config integrate{};
    std::string output = "out.csv";

    operator_config make_operator_config() const {
        operator_config cfg;
        cfg.n = n;
        cfg.pq = pq;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.trunc = trunc;
        cfg.quad = quad;
        cfg.form = form;
        cfg.validate();
        return cfg;
    }
};

namespace detail {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw validation_error(where + " must be a JSON object");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw validation_error(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace detail

inline run_config load_run_config(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config is not valid JSON: ") + e.what());
    }
    detail::expect_object(j, "config");
    run_config rc;
    rc.n = detail::get_or(j, "n", rc.n);
    const double p = detail::get_or(j, "p", rc.pq.p);
    const double q = detail::get_or(j, "q", rc.pq.q);
    rc.pq = pq_pair(p, q);  // validates 0 < q <= p <= 1
    rc.alpha = detail::get_or(j, "alpha", rc.alpha);
    rc.beta = detail::get_or(j, "beta", rc.beta);
    if (j.contains("trunc")) {
        const auto& t = j.at("trunc");
        detail::expect_object(t, "trunc");
        rc.trunc.abs_tol = detail::get_or(t, "abs_tol", rc.trunc.abs_tol);
        rc.trunc.max_terms = detail::get_or(t, "max_terms", rc.trunc.max_terms);
        rc.trunc.consecutive = detail::get_or(t, "consecutive", rc.trunc.consecutive);
    }
    rc.trunc.validate();
    if (j.contains("quad")) {
        const auto& t = j.at("quad");
        detail::expect_object(t, "quad");
        rc.quad.node_budget = detail::get_or(t, "node_budget", rc.quad.node_budget);
        rc.quad.abs_tol = detail::get_or(t, "abs_tol", rc.quad.abs_tol);
        rc.quad.classical_panels =
            detail::get_or(t, "classical_panels", rc.quad.classical_panels);
    }
    rc.quad.validate();
    if (j.contains("grid")) {
        const auto& t = j.at("grid");
        detail::expect_object(t, "grid");
        rc.g.x_min = detail::get_or(t, "x_min", rc.g.x_min);
        rc.g.x_max = detail::get_or(t, "x_max", rc.g.x_max);
        rc.g.points = detail::get_or(t, "points", rc.g.points);
    }
    rc.g.validate();
    if (j.contains("scheme")) {
        const auto& t = j.at("scheme");
        detail::expect_object(t, "scheme");
        rc.scheme.c_p = detail::get_or(t, "c_p", rc.scheme.c_p);
        rc.scheme.c_q = detail::get_or(t, "c_q", rc.scheme.c_q);
    }
    rc.scheme.validate();
    rc.ns = detail::get_or(j, "ns", rc.ns);
    for (int n : rc.ns)
        if (n < 4) throw validation_error("config ns[]: every n must be >= 4");
    rc.xs = detail::get_or(j, "xs", rc.xs);
    for (double x : rc.xs)
        if (x < 0.0) throw validation_error("config xs[]: every x must be >= 0");
    if (j.contains("function")) {
        const auto& t = j.at("function");
        detail::expect_object(t, "function");
        function_config fc;
        fc.expr = detail::get_or<std::string>(t, "expr", "");
        if (fc.expr.empty()) throw validation_error("function.expr must be non-empty");
        if (t.contains("d1")) fc.d1 = t.at("d1").get<std::string>();
        if (t.contains("d2")) fc.d2 = t.at("d2").get<std::string>();
        rc.function = std::move(fc);
    }
    if (j.contains("form")) {
        const std::string f = j.at("form").get<std::string>();
        if (f == "validated") rc.form = moment_form::validated;
        else if (f == "printed") rc.form = moment_form::printed;
        else throw validation_error("config form must be 'validated' or 'printed'");
        rc.form_explicit = rc.form;
    }
    if (j.contains("integrate")) {
        const auto& t = j.at("integrate");
        detail::expect_object(t, "integrate");
        rc.integrate.kind = detail::get_or<std::string>(t, "kind", rc.integrate.kind);
        rc.integrate.upper = detail::get_or(t, "upper", rc.integrate.upper);
        if (rc.integrate.kind != "finite" && rc.integrate.kind != "improper" &&
            rc.integrate.kind != "classical")
            throw validation_error("integrate.kind must be finite|improper|classical");
        if (rc.integrate.kind == "finite" && !(rc.integrate.upper > 0.0))
            throw validation_error("integrate.upper must be > 0");
    }
    rc.output = detail::get_or<std::string>(j, "output", rc.output);
    return rc;
}

/// Resolved-config JSON (the sidecar payload) with every default filled in.
inline std::string render_resolved_config(const run_config& rc,
                                          const std::string& command,
                                          const std::string& version_string) {
    nlohmann::json j;
    j["command"] = command;
    j["version"] = version_string;
    j["n"] = rc.n;
    j["p"] = rc.pq.p;
    j["q"] = rc.pq.q;
    j["alpha"] = rc.alpha;
    j["beta"] = rc.beta;
    j["trunc"] = {{"abs_tol", rc.trunc.abs_tol},
                  {"max_terms", rc.trunc.max_terms},
                  {"consecutive", rc.trunc.consecutive}};
    j["quad"] = {{"node_budget", rc.quad.node_budget},
                 {"abs_tol", rc.quad.abs_tol},
                 {"classical_panels", rc.quad.classical_panels}};
    j["grid"] = {{"x_min", rc.g.x_min}, {"x_max", rc.g.x_max}, {"points", rc.g.points}};
    j["scheme"] = {{"c_p", rc.scheme.c_p}, {"c_q", rc.scheme.c_q}};
    j["ns"] = rc.ns;
    j["xs"] = rc.xs;
    if (rc.function) {
        j["function"] = {{"expr", rc.function->expr}};
        if (rc.function->d1) j["function"]["d1"] = *rc.function->d1;
        if (rc.function->d2) j["function"]["d2"] = *rc.function->d2;
    }
    j["form"] = rc.form == moment_form::validated ? "validated" : "printed";
    j["integrate"] = {{"kind", rc.integrate.kind}, {"upper", rc.integrate.upper}};
    j["output"] = rc.output;
    return j.dump(2) + "\n";
}

}  // namespace pqlab
