#pragma once

#include "kahlerflow/evolve.hpp"

namespace kahlerflow {

// alpha_tau = sum_{k>=1} tau^k/k! X_h^{k-1}(theta(X_h))
TauSeries alpha_series(const HamSystem& sys, int order);

// Evolution of the Kahler potential:
//   psi_tau   = -(i/2) e^{tau X_h} kappa0 + tau h - alpha_tau
//   kappa_tau = -2 Im psi_tau
class PotentialFlow {
public:
    PotentialFlow(const HamSystem& sys, int order);

    const TauSeries& alpha() const { return alpha_; }
    const TauSeries& psi() const { return psi_; }

    Complex psi_value(Complex tau, const Point& p) const;
    double kappa(Complex tau, const Point& p) const;

    // exact symbolic potential at a rational time value
    Expr kappa_expr(const RationalComplex& tau) const;

private:
    TauSeries alpha_;
    TauSeries psi_;
};

double kahler_potential(const HamSystem& sys, int order, Complex tau, const Point& p);

struct PotentialVerification {
    double max_residual = 0.0;
    int checked = 0;
    int skipped = 0;  // non-Kahler classification or chart inversion failure
};

// Residual of omega = i d dbar kappa_tau, measured entrywise against the
// metric coefficients with second-order central differences of kappa in the
// evolved chart coordinates.
PotentialVerification verify_potential(const HamSystem& sys, const EvolvedStructure& es,
                                       Complex tau, const GridSpec& grid, double fd_step);

// max_p |kappa_{tau+s}(p) - kappa_tau(flow_s(p))| over the grid, s real
double real_time_cocycle_check(const HamSystem& sys, int order, Complex tau, double s,
                               const GridSpec& grid);

// symbolic variant; normalizes to zero when all involved series terminate
Expr real_time_cocycle_defect(const HamSystem& sys, int order, const RationalComplex& tau,
                              const RationalComplex& s);

// e^{i psi_tau(p)}
Complex prequantum_evolution(const HamSystem& sys, int order, Complex tau, const Point& p);

// |d/dt e^{i psi_t} + i hhat e^{i psi_t}| at real t, applied through finite
// differences. The generator carries the action-phase scalar,
// hhat = i X_h + theta(X_h) - h, which is what differentiating psi_t yields.
double prequantum_ode_residual(const HamSystem& sys, int order, double t, const Point& p,
                               double fd_time_step, double fd_space_step);

}  // namespace kahlerflow
