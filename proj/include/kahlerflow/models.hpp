#pragma once

#include <functional>

#include "kahlerflow/evolve.hpp"

namespace kahlerflow {

// n degrees of freedom on the standard plane: coordinates x_j, y_j, chart
// z_j = x_j + i y_j, omega = sum dx_j ^ dy_j, kappa0 = sum (x_j^2+y_j^2)/2,
// theta = sum (y_j dx_j - x_j dy_j)/2.
HamSystem standard_system(int n, const Expr& h, GridSpec domain);

// Global linear complex structure z = x + tau0 y flowed by h = y^2/2.
HamSystem linear_model(const RationalComplex& tau0, GridSpec domain = {});

// h = (xy)^2/2 on the standard plane.
HamSystem quartic_model(GridSpec domain = {});

// h = h(y) on the standard plane; the chart series terminates at order 1.
HamSystem separable_model(const Expr& h_of_y, GridSpec domain = {});

// Flat torus phase space in angle coordinates: chart z = q + i y on a
// fundamental-domain box (periodicity is not unwrapped), theta = y dq.
HamSystem torus_model(const Expr& h_of_y, GridSpec domain = {});

// Closed forms shipped with the worked models, used as golden oracles.
namespace refs {

// x + (tau0+tau) y
Complex linear_chart(const RationalComplex& tau0, Complex tau, const Point& p);
// gamma_tau = (1/S) dx^2 + 2(R/S) dx dy + ((S^2+R^2)/S) dy^2
Eigen::Matrix2d linear_gamma(const RationalComplex& tau0, Complex tau);
// the linear map realizing the flow on coordinates
Eigen::Matrix2d linear_flow_matrix(const RationalComplex& tau0, Complex tau);

// e^{itxy} x + i e^{-itxy} y
Complex quartic_chart(double t, const Point& p);
// cos(2txy)(x^2+y^2)/2 + t x^2 y^2
double quartic_kappa(double t, const Point& p);
// 1/g = 2t(x^2+y^2-2xy sin(2txy)) + 2cos(2txy)
double quartic_inverse_g(double t, const Point& p);

}  // namespace refs

// Separable flow with numeric (possibly non-analytic) h(y); the evolved chart
// and flow map are exact two-term expressions in h'.
struct SeparableMap {
    std::function<double(double)> h;
    std::function<double(double)> dh;
    std::function<double(double)> d2h;  // optional; finite differences of dh when absent

    Complex chart(Complex tau, double x, double y) const;
    std::pair<double, double> flow(Complex tau, double x, double y) const;
    double jacobian_det(Complex tau, double y) const;  // 1 + s h''(y)
    PolarizationTag classify(Complex tau, double y) const;
    // true when 1 + s h'' > 0 across the sampled interval
    bool diffeomorphism_on(Complex tau, double ylo, double yhi, int samples) const;

    double second_derivative(double y) const;
};

// smooth but non real-analytic h: flat to all orders at y = 0
SeparableMap bump_separable_map();

}  // namespace kahlerflow
