#include "kahlerflow/config.hpp"

#include <fstream>
#include <set>

namespace kahlerflow {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
}

Complex parse_complex(const json& v, const char* what) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Complex(v[0].get<double>(), v[1].get<double>());
    throw ConfigError(std::string(what) + " must be a number or [re, im]");
}

GridSpec parse_grid(const json& g) {
    reject_unknown(g, {"axes"}, "grid");
    if (!g.contains("axes") || !g["axes"].is_array() || g["axes"].empty())
        throw ConfigError("grid: 'axes' must be a non-empty array");
    GridSpec spec;
    for (const auto& a : g["axes"]) {
        reject_unknown(a, {"name", "lo", "hi", "count"}, "grid axis");
        for (const char* key : {"name", "lo", "hi", "count"})
            if (!a.contains(key))
                throw ConfigError(std::string("grid axis: missing '") + key + "'");
        spec.axes.push_back({a["name"].get<std::string>(), a["lo"].get<double>(),
                             a["hi"].get<double>(), a["count"].get<int>()});
    }
    spec.validate();
    return spec;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse(j);
}

RunConfig RunConfig::parse(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(j,
                   {"model", "parameters", "tau", "tau_sweep", "t_samples", "grid", "order",
                    "fd_time_step", "fd_space_step", "ode_tol"},
                   "config");
    RunConfig cfg;
    if (!j.contains("model") || !j["model"].is_string())
        throw ConfigError("config: 'model' (string) is required");
    cfg.model = j["model"].get<std::string>();
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object()) throw ConfigError("config: 'parameters' must be an object");
        cfg.parameters = j["parameters"];
    }
    if (j.contains("tau") && j.contains("tau_sweep"))
        throw ConfigError("config: give either 'tau' or 'tau_sweep', not both");
    if (j.contains("tau")) cfg.taus = {parse_complex(j["tau"], "tau")};
    if (j.contains("tau_sweep")) {
        if (!j["tau_sweep"].is_array() || j["tau_sweep"].empty())
            throw ConfigError("config: 'tau_sweep' must be a non-empty array");
        cfg.taus.clear();
        for (const auto& v : j["tau_sweep"]) cfg.taus.push_back(parse_complex(v, "tau_sweep entry"));
    }
    if (j.contains("t_samples")) {
        if (!j["t_samples"].is_array()) throw ConfigError("config: 't_samples' must be an array");
        for (const auto& v : j["t_samples"]) {
            if (!v.is_number()) throw ConfigError("config: 't_samples' entries must be numbers");
            cfg.t_samples.push_back(v.get<double>());
        }
    }
    if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
    if (j.contains("order")) {
        cfg.order = j["order"].get<int>();
        if (cfg.order < 1 || cfg.order > 32)
            throw ConfigError("config: 'order' must be between 1 and 32");
    }
    auto positive = [&](const char* key, double& slot) {
        if (!j.contains(key)) return;
        double v = j[key].get<double>();
        if (!(v > 0)) throw ConfigError(std::string("config: '") + key + "' must be positive");
        slot = v;
    };
    positive("fd_time_step", cfg.fd_time_step);
    positive("fd_space_step", cfg.fd_space_step);
    positive("ode_tol", cfg.ode_tol);
    return cfg;
}

BuiltModel build_model(const RunConfig& cfg) {
    const json& p = cfg.parameters;
    BuiltModel out;
    out.kind = cfg.model;
    GridSpec grid = cfg.grid.value_or(GridSpec{});
    if (cfg.model == "linear") {
        reject_unknown(p, {"tau0"}, "linear parameters");
        RationalComplex tau0 = RationalComplex::i();
        if (p.contains("tau0")) {
            Complex v = parse_complex(p["tau0"], "tau0");
            tau0 = RationalComplex(v);
        }
        if (!(tau0.im > 0)) throw ConfigError("linear model: Im(tau0) must be positive");
        out.tau0 = tau0;
        out.system.emplace(linear_model(tau0, grid));
    } else if (cfg.model == "quartic") {
        reject_unknown(p, {}, "quartic parameters");
        out.system.emplace(quartic_model(grid));
    } else if (cfg.model == "separable") {
        reject_unknown(p, {"h"}, "separable parameters");
        std::string h = p.contains("h") ? p["h"].get<std::string>() : "y^2/2";
        if (h == "bump") {
            out.separable = bump_separable_map();
        } else {
            try {
                out.system.emplace(separable_model(parse_expr(h), grid));
            } catch (const ParseError& e) {
                throw ConfigError(std::string("separable model: bad 'h': ") + e.what());
            }
        }
    } else if (cfg.model == "tstark-torus") {
        reject_unknown(p, {"h", "theta"}, "tstark-torus parameters");
        std::string h = p.contains("h") ? p["h"].get<std::string>() : "y^2/2";
        Expr h_expr;
        try {
            h_expr = parse_expr(h);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("tstark-torus: bad 'h': ") + e.what());
        }
        out.system.emplace(torus_model(h_expr, grid));
        Expr du = normalize(differentiate(h_expr, "y"));
        AlgebraHamiltonian ah;
        ah.value = [h_expr](const Eigen::VectorXd& y) {
            return evaluate(h_expr, {{"y", y(0)}}).real();
        };
        ah.grad = [du](const Eigen::VectorXd& y) {
            Eigen::VectorXd u(1);
            u(0) = evaluate(du, {{"y", y(0)}}).real();
            return u;
        };
        out.algebra_h = ah;
        out.algebra_dim = 1;
        double theta = p.contains("theta") ? p["theta"].get<double>() : 0.0;
        out.group_element = TorusRep{1}.group(Eigen::VectorXd::Constant(1, theta));
    } else if (cfg.model == "tstark-su2") {
        reject_unknown(p, {"h", "x"}, "tstark-su2 parameters");
        std::string h = p.contains("h") ? p["h"].get<std::string>() : "quadratic";
        if (h != "quadratic")
            throw ConfigError("tstark-su2: only the quadratic Ad-invariant h is built in");
        out.algebra_h = quadratic_algebra_hamiltonian();
        out.algebra_dim = 3;
        Eigen::Matrix2cd x = Eigen::Matrix2cd::Identity();
        if (p.contains("x")) {
            Complex a = parse_complex(p["x"][0], "x[0]");
            Complex b = parse_complex(p["x"][1], "x[1]");
            double norm = std::sqrt(std::norm(a) + std::norm(b));
            if (!(norm > 0)) throw ConfigError("tstark-su2: 'x' must be nonzero");
            a /= norm;
            b /= norm;
            x << a, -std::conj(b), b, std::conj(a);
        }
        out.group_element = x;
    } else {
        throw ConfigError("unknown model '" + cfg.model +
                          "' (expected linear, quartic, separable, tstark-torus or tstark-su2)");
    }
    return out;
}

}  // namespace kahlerflow
