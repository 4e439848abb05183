#include "kahlerflow/models.hpp"

#include <cmath>

namespace kahlerflow {

namespace {

GridSpec default_box(const std::vector<std::string>& coords, double half_width) {
    GridSpec g;
    for (const auto& c : coords) g.axes.push_back({c, -half_width, half_width, 9});
    return g;
}

}  // namespace

HamSystem standard_system(int n, const Expr& h, GridSpec domain) {
    std::vector<std::string> xs, ys;
    if (n == 1) {
        xs = {"x"};
        ys = {"y"};
    } else {
        for (int j = 1; j <= n; ++j) {
            xs.push_back("x" + std::to_string(j));
            ys.push_back("y" + std::to_string(j));
        }
    }
    SymplecticForm w = SymplecticForm::standard(xs, ys);
    std::vector<Expr> theta, chart;
    Expr kappa0;
    for (int j = 0; j < n; ++j) {
        Expr x = Expr::symbol(xs[j]);
        Expr y = Expr::symbol(ys[j]);
        chart.push_back(x + Expr::i() * y);
        kappa0 = kappa0 + Expr::rational(1, 2) * (pow(x, 2) + pow(y, 2));
    }
    for (int j = 0; j < n; ++j) theta.push_back(Expr::rational(1, 2) * Expr::symbol(ys[j]));
    for (int j = 0; j < n; ++j) theta.push_back(Expr::rational(-1, 2) * Expr::symbol(xs[j]));
    if (domain.axes.empty()) domain = default_box(w.coords, 1.0);
    return HamSystem(std::move(w), h, std::move(theta), std::move(chart), std::move(kappa0),
                     std::move(domain));
}

HamSystem linear_model(const RationalComplex& tau0, GridSpec domain) {
    if (!(tau0.im > 0))
        throw Error("linear model: Im(tau0) must be positive for an initial Kahler structure");
    Expr x = Expr::symbol("x");
    Expr y = Expr::symbol("y");
    Expr z = x + Expr::constant(tau0) * y;
    Expr zbar = x + Expr::constant(tau0.conj()) * y;
    RationalComplex inv_2s0(Rational(1) / (2 * tau0.im));
    Expr kappa0 = normalize(Expr::constant(inv_2s0) * z * zbar);
    std::vector<Expr> theta = {Expr::rational(1, 2) * y, Expr::rational(-1, 2) * x};
    SymplecticForm w = SymplecticForm::standard({"x"}, {"y"});
    if (domain.axes.empty()) domain = default_box(w.coords, 2.0);
    return HamSystem(std::move(w), Expr::rational(1, 2) * pow(y, 2), std::move(theta), {z},
                     std::move(kappa0), std::move(domain));
}

HamSystem quartic_model(GridSpec domain) {
    Expr x = Expr::symbol("x");
    Expr y = Expr::symbol("y");
    return standard_system(1, Expr::rational(1, 2) * pow(x * y, 2), std::move(domain));
}

HamSystem separable_model(const Expr& h_of_y, GridSpec domain) {
    for (const auto& s : free_symbols(h_of_y))
        if (s != "y") throw Error("separable model: h may only depend on y");
    return standard_system(1, h_of_y, std::move(domain));
}

HamSystem torus_model(const Expr& h_of_y, GridSpec domain) {
    for (const auto& s : free_symbols(h_of_y))
        if (s != "y") throw Error("torus model: h may only depend on y");
    Expr q = Expr::symbol("q");
    Expr y = Expr::symbol("y");
    SymplecticForm w = SymplecticForm::standard({"q"}, {"y"});
    std::vector<Expr> theta = {y, Expr()};
    if (domain.axes.empty()) {
        domain.axes.push_back({"q", -3.0, 3.0, 9});
        domain.axes.push_back({"y", -1.5, 1.5, 9});
    }
    return HamSystem(std::move(w), h_of_y, std::move(theta), {q + Expr::i() * y}, pow(y, 2),
                     std::move(domain));
}

namespace refs {

Complex linear_chart(const RationalComplex& tau0, Complex tau, const Point& p) {
    return p.at("x") + (tau0.to_complex() + tau) * p.at("y");
}

Eigen::Matrix2d linear_gamma(const RationalComplex& tau0, Complex tau) {
    double r = tau0.to_complex().real() + tau.real();
    double s = tau0.to_complex().imag() + tau.imag();
    Eigen::Matrix2d g;
    g(0, 0) = 1.0 / s;
    g(0, 1) = g(1, 0) = r / s;
    g(1, 1) = (s * s + r * r) / s;
    return g;
}

Eigen::Matrix2d linear_flow_matrix(const RationalComplex& tau0, Complex tau) {
    double r0 = tau0.to_complex().real();
    double s0 = tau0.to_complex().imag();
    double r = tau.real();
    double s = tau.imag();
    Eigen::Matrix2d m;
    m(0, 0) = 1.0;
    m(0, 1) = r + r0 - (s + s0) * r0 / s0;
    m(1, 0) = 0.0;
    m(1, 1) = (s + s0) / s0;
    return m;
}

Complex quartic_chart(double t, const Point& p) {
    Complex x = p.at("x"), y = p.at("y");
    Complex arg = Complex(0, t) * x * y;
    return std::exp(arg) * x + Complex(0, 1) * std::exp(-arg) * y;
}

double quartic_kappa(double t, const Point& p) {
    double x = p.at("x").real(), y = p.at("y").real();
    return 0.5 * std::cos(2 * t * x * y) * (x * x + y * y) + t * x * x * y * y;
}

double quartic_inverse_g(double t, const Point& p) {
    double x = p.at("x").real(), y = p.at("y").real();
    return 2 * t * (x * x + y * y - 2 * x * y * std::sin(2 * t * x * y)) +
           2 * std::cos(2 * t * x * y);
}

}  // namespace refs

double SeparableMap::second_derivative(double y) const {
    if (d2h) return d2h(y);
    double step = 1e-6;
    return (dh(y + step) - dh(y - step)) / (2 * step);
}

Complex SeparableMap::chart(Complex tau, double x, double y) const {
    double hp = dh(y);
    return Complex(x + tau.real() * hp, y + tau.imag() * hp);
}

std::pair<double, double> SeparableMap::flow(Complex tau, double x, double y) const {
    double hp = dh(y);
    return {x + tau.real() * hp, y + tau.imag() * hp};
}

double SeparableMap::jacobian_det(Complex tau, double y) const {
    return 1.0 + tau.imag() * second_derivative(y);
}

PolarizationTag SeparableMap::classify(Complex tau, double y) const {
    double det = jacobian_det(tau, y);
    double scale = std::max(1.0, std::abs(tau.imag() * second_derivative(y)));
    if (std::abs(det) <= kRankThreshold * scale) return PolarizationTag::Real;
    return det > 0 ? PolarizationTag::Kahler : PolarizationTag::PseudoKahler;
}

bool SeparableMap::diffeomorphism_on(Complex tau, double ylo, double yhi, int samples) const {
    for (int k = 0; k < samples; ++k) {
        double y = ylo + (yhi - ylo) * k / (samples - 1);
        if (!(jacobian_det(tau, y) > 0)) return false;
    }
    return true;
}

SeparableMap bump_separable_map() {
    // h(y) = y^2/2 + exp(-1/y^2): smooth everywhere, not analytic at y = 0
    auto bump = [](double y) { return y == 0.0 ? 0.0 : std::exp(-1.0 / (y * y)); };
    SeparableMap m;
    m.h = [bump](double y) { return 0.5 * y * y + bump(y); };
    m.dh = [bump](double y) { return y == 0.0 ? 0.0 : y + 2.0 / (y * y * y) * bump(y); };
    m.d2h = [bump](double y) {
        if (y == 0.0) return 1.0;
        double y2 = y * y;
        return 1.0 + (4.0 / (y2 * y2 * y2) - 6.0 / (y2 * y2)) * bump(y);
    };
    return m;
}

}  // namespace kahlerflow
