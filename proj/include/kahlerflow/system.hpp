#pragma once

#include <Eigen/Dense>

#include "kahlerflow/lie.hpp"

namespace kahlerflow {

// A Hamiltonian system together with its initial Kahler data: symplectic form
// omega, Hamiltonian h, real symplectic potential theta with omega = -d theta,
// holomorphic chart z and Kahler potential kappa0 for the initial structure,
// plus the domain box the numerics are trusted on.
struct HamSystem {
    SymplecticForm omega;
    Expr h;
    std::vector<Expr> theta;  // components over omega.coords
    std::vector<Expr> chart;  // n holomorphic coordinate functions
    Expr kappa0;
    GridSpec domain;

    HamSystem(SymplecticForm omega, Expr h, std::vector<Expr> theta, std::vector<Expr> chart,
              Expr kappa0, GridSpec domain);

    const std::vector<std::string>& coords() const { return omega.coords; }
    int n() const { return static_cast<int>(chart.size()); }
    int dim() const { return static_cast<int>(omega.coords.size()); }
    const Derivation& field() const { return field_; }

    // theta contracted with a vector field
    Expr theta_pairing(const Derivation& v) const;

    // omega as a real antisymmetric matrix at p
    Eigen::MatrixXd omega_matrix(const Point& p) const;

    // rows j: d z^j / d xi^m at p (n x 2n)
    Eigen::MatrixXcd chart_jacobian(const Point& p) const;

    // [dz; dzbar] frame (2n x 2n)
    Eigen::MatrixXcd chart_frame(const Point& p) const;

    // Checks the structural hypotheses: d theta + omega = 0 exactly,
    // theta^(0,1) = -(i/2) dbar kappa0 and positivity of omega in the initial
    // chart on the domain grid. Throws on violation.
    void validate(double tol = 1e-10) const;

private:
    Derivation field_;
    std::vector<Expr> dchart_;  // row-major n x 2n partials of the chart
    std::vector<Expr> dkappa0_;
};

// frame-change of a real 2-form matrix: returns C^{-T} W C^{-1}
Eigen::MatrixXcd two_form_in_frame(const Eigen::MatrixXd& w, const Eigen::MatrixXcd& frame);

}  // namespace kahlerflow
