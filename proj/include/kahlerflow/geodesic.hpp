#pragma once

#include "kahlerflow/potential.hpp"

namespace kahlerflow {

// Probe for the geodesic property of the imaginary-time potential path
// phi_t = kappa_{it} o Phi_t^{-1} - kappa_0, with Phi_t the Moser map phi_{it}.
struct GeodesicProbe {
    const HamSystem* sys;
    EvolvedStructure es;
    PotentialFlow pf;
    std::vector<double> t_samples;
    GridSpec grid;
    double dt = 1e-3;
    double dx = 1e-3;

    GeodesicProbe(const HamSystem& system, std::vector<double> ts, GridSpec grid, int order,
                  double dt = 1e-3, double dx = 1e-3);

    // t-samples strictly increasing and every probed (t, p) Kahler
    void validate() const;
};

Point moser_inverse(const EvolvedStructure& es, Complex tau, const Point& q);

double mabuchi_path_value(const GeodesicProbe& probe, double t, const Point& q);

// |d/dt phi_t(q) + 2 h(Phi_t^{-1}(q))|, central difference in t
double velocity_check(const GeodesicProbe& probe, double t, const Point& q);

struct GeodesicResidual {
    double residual;
    double ddot_phi;        // second time difference
    double grad_term;       // (1/2) |grad phidot|^2 in the metric of omega_t
};
GeodesicResidual geodesic_residual(const GeodesicProbe& probe, double t, const Point& q);

// residuals at (dt,dx) and (dt/2,dx/2) plus the observed convergence order
struct RefinementReport {
    double coarse;
    double fine;
    double observed_order;  // log2(coarse/fine)
};
RefinementReport geodesic_refinement(const GeodesicProbe& probe, double t, const Point& q);

// (phi_tau^{-1})^* omega at q as a real matrix
Eigen::MatrixXd pulled_back_omega(const EvolvedStructure& es, Complex tau, const Point& q);

// max |dz^j ^ dz^k component| of a real 2-form in the initial chart at q
double type_one_one_defect(const HamSystem& sys, const Eigen::MatrixXd& form, const Point& q);

// | ||X_h||^2 - ||dh||^2 | in gamma_tau at p
double kahler_identity_residual(const EvolvedStructure& es, Complex tau, const Point& p);

// per-(t, q) data of the metric path
struct MetricPathSample {
    double kappa;
    double phi;
    Eigen::MatrixXd omega_t;  // pulled-back symplectic form at q
    Eigen::MatrixXd gamma;    // omega_t(., J_0 .)
};
MetricPathSample metric_path_sample(const GeodesicProbe& probe, double t, const Point& q);

// Informational only: |phidot|^2 integrated over the grid box by the
// trapezoid rule against the omega_t volume. The models are noncompact, so
// this is not a Mabuchi-metric value; `caveat` says so.
struct MabuchiSpeed {
    double value;
    const char* caveat;
};
MabuchiSpeed mabuchi_speed_quadrature(const GeodesicProbe& probe, double t);

}  // namespace kahlerflow
