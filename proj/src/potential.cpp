#include "kahlerflow/potential.hpp"

#include <cmath>

namespace kahlerflow {

TauSeries alpha_series(const HamSystem& sys, int order) {
    if (order < 1) throw Error("alpha_series: order must be >= 1");
    const Derivation& field = sys.field();
    std::vector<Expr> coeffs(order + 1);
    coeffs[0] = Expr();
    coeffs[1] = sys.theta_pairing(field);
    for (int k = 1; k < order; ++k)
        coeffs[k + 1] = normalize(field.apply(coeffs[k]) * Expr::rational(1, k + 1));
    return TauSeries(TimeTag::Tau, std::move(coeffs));
}

namespace {

TauSeries build_psi(const HamSystem& sys, int order, const TauSeries& alpha) {
    TauSeries evolved_kappa = lie_exp(sys.field(), sys.kappa0, order);
    RationalComplex half_i(Rational(0), Rational(-1, 2));  // -i/2
    std::vector<Expr> coeffs(order + 1);
    for (int k = 0; k <= order; ++k) {
        Expr c = Expr::constant(half_i) * evolved_kappa.coeff(k) - alpha.coeff(k);
        if (k == 1) c = c + sys.h;
        coeffs[k] = normalize(c);
    }
    return TauSeries(TimeTag::Tau, std::move(coeffs));
}

}  // namespace

PotentialFlow::PotentialFlow(const HamSystem& sys, int order)
    : alpha_(alpha_series(sys, order)), psi_(build_psi(sys, order, alpha_)) {}

Complex PotentialFlow::psi_value(Complex tau, const Point& p) const {
    return eval_series(psi_, tau, p);
}

double PotentialFlow::kappa(Complex tau, const Point& p) const {
    return -2.0 * psi_value(tau, p).imag();
}

Expr PotentialFlow::kappa_expr(const RationalComplex& tau) const {
    Expr psi = series_to_expr(psi_, tau);
    // -2 Im w  =  i (w - conj w)
    return normalize(Expr::i() * (psi - conj(psi)));
}

double kahler_potential(const HamSystem& sys, int order, Complex tau, const Point& p) {
    return PotentialFlow(sys, order).kappa(tau, p);
}

PotentialVerification verify_potential(const HamSystem& sys, const EvolvedStructure& es,
                                       Complex tau, const GridSpec& grid, double fd_step) {
    if (fd_step <= 0) throw Error("verify_potential: fd step must be positive");
    PotentialFlow pf(sys, es.order());
    int n = sys.n();
    PotentialVerification out;
    for (const auto& p : grid.points()) {
        HermitianMetric m = metric_at(es, tau, p);
        if (!m.valid || m.cls.tag != PolarizationTag::Kahler) {
            ++out.skipped;
            continue;
        }
        Eigen::VectorXcd center = es.chart_value(tau, p);
        auto kappa_at = [&](const Eigen::VectorXd& u) {
            Eigen::VectorXcd target(n);
            for (int j = 0; j < n; ++j) target(j) = Complex(u(j), u(n + j));
            Point xi = invert_evolved_chart(es, tau, target, p);
            return pf.kappa(tau, xi);
        };
        Eigen::VectorXd u0(2 * n);
        for (int j = 0; j < n; ++j) {
            u0(j) = center(j).real();
            u0(n + j) = center(j).imag();
        }
        try {
            double h = fd_step;
            Eigen::MatrixXd hess(2 * n, 2 * n);
            double f0 = kappa_at(u0);
            for (int a = 0; a < 2 * n; ++a) {
                Eigen::VectorXd up = u0, dn = u0;
                up(a) += h;
                dn(a) -= h;
                hess(a, a) = (kappa_at(up) - 2 * f0 + kappa_at(dn)) / (h * h);
            }
            for (int a = 0; a < 2 * n; ++a) {
                for (int b = a + 1; b < 2 * n; ++b) {
                    Eigen::VectorXd pp = u0, pm = u0, mp = u0, mm = u0;
                    pp(a) += h; pp(b) += h;
                    pm(a) += h; pm(b) -= h;
                    mp(a) -= h; mp(b) += h;
                    mm(a) -= h; mm(b) -= h;
                    hess(a, b) = hess(b, a) =
                        (kappa_at(pp) - kappa_at(pm) - kappa_at(mp) + kappa_at(mm)) / (4 * h * h);
                }
            }
            // d^2 kappa / dz^j dzbar^k from the real Hessian in chart coordinates
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    Complex ddbar = 0.25 * Complex(hess(j, k) + hess(n + j, n + k),
                                                   hess(j, n + k) - hess(n + j, k));
                    out.max_residual = std::max(out.max_residual, std::abs(m.g(j, k) - ddbar));
                }
            }
            ++out.checked;
        } catch (const NewtonError&) {
            ++out.skipped;
        }
    }
    return out;
}

double real_time_cocycle_check(const HamSystem& sys, int order, Complex tau, double s,
                               const GridSpec& grid) {
    PotentialFlow pf(sys, order);
    std::vector<TauSeries> coord_series;
    for (const auto& c : sys.coords())
        coord_series.push_back(lie_exp(sys.field(), Expr::symbol(c), order));
    double worst = 0.0;
    for (const auto& p : grid.points()) {
        Point flowed;
        for (std::size_t m = 0; m < coord_series.size(); ++m)
            flowed.set(sys.coords()[m], eval_series(coord_series[m], s, p).real());
        double lhs = pf.kappa(tau + s, p);
        double rhs = pf.kappa(tau, flowed);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

Expr real_time_cocycle_defect(const HamSystem& sys, int order, const RationalComplex& tau,
                              const RationalComplex& s) {
    if (!s.is_real()) throw Error("cocycle defect: s must be real");
    PotentialFlow pf(sys, order);
    Expr lhs = pf.kappa_expr(tau + s);
    Expr rhs = series_to_expr(lie_exp(sys.field(), pf.kappa_expr(tau), order), s);
    return normalize(lhs - rhs);
}

Complex prequantum_evolution(const HamSystem& sys, int order, Complex tau, const Point& p) {
    PotentialFlow pf(sys, order);
    return std::exp(Complex(0, 1) * pf.psi_value(tau, p));
}

double prequantum_ode_residual(const HamSystem& sys, int order, double t, const Point& p,
                               double fd_time_step, double fd_space_step) {
    PotentialFlow pf(sys, order);
    auto section = [&](double time, const Point& q) {
        return std::exp(Complex(0, 1) * pf.psi_value(Complex(time, 0.0), q));
    };
    Complex ddt = (section(t + fd_time_step, p) - section(t - fd_time_step, p)) / (2 * fd_time_step);
    // hhat F = i X_h(F) + (h - theta(X_h)) F
    Complex xh_f = 0.0;
    const auto& coords = sys.coords();
    for (std::size_t m = 0; m < coords.size(); ++m) {
        Complex a = evaluate(sys.field().components[m], p);
        Point up = p, dn = p;
        up.set(coords[m], p.at(coords[m]) + fd_space_step);
        dn.set(coords[m], p.at(coords[m]) - fd_space_step);
        xh_f += a * (section(t, up) - section(t, dn)) / (2 * fd_space_step);
    }
    Complex pot = evaluate(sys.theta_pairing(sys.field()), p) - evaluate(sys.h, p);
    Complex hhat_f = Complex(0, 1) * xh_f + pot * section(t, p);
    return std::abs(ddt + Complex(0, 1) * hhat_f);
}

}  // namespace kahlerflow
