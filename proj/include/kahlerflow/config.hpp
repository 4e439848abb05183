#pragma once

#include <optional>

#include <json.hpp>

#include "kahlerflow/models.hpp"
#include "kahlerflow/tstark.hpp"

namespace kahlerflow {

// Batch-run configuration; strict schema (unknown keys rejected).
struct RunConfig {
    std::string model;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<Complex> taus = {Complex(0, 0)};
    std::vector<double> t_samples;
    std::optional<GridSpec> grid;
    int order = 12;
    double fd_time_step = 1e-3;
    double fd_space_step = 1e-3;
    double ode_tol = 1e-10;

    static RunConfig load(const std::string& path);
    static RunConfig parse(const nlohmann::json& j);
};

// A model instantiated from configuration. Symbolic models carry a HamSystem;
// the non-analytic separable variant carries the chart map; the T*K models
// carry algebra-level data.
struct BuiltModel {
    std::string kind;
    std::optional<HamSystem> system;
    std::optional<SeparableMap> separable;
    std::optional<AlgebraHamiltonian> algebra_h;
    int algebra_dim = 0;
    Eigen::MatrixXcd group_element;  // representation matrix for T*K models
    RationalComplex tau0;            // linear model parameter
};

BuiltModel build_model(const RunConfig& cfg);

}  // namespace kahlerflow
