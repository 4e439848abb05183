#include "kahlerflow/geodesic.hpp"

#include <cmath>

namespace kahlerflow {

GeodesicProbe::GeodesicProbe(const HamSystem& system, std::vector<double> ts, GridSpec grid_,
                             int order, double dt_, double dx_)
    : sys(&system), es(system, order), pf(system, order), t_samples(std::move(ts)),
      grid(std::move(grid_)), dt(dt_), dx(dx_) {
    if (dt <= 0 || dx <= 0) throw Error("geodesic probe: steps must be positive");
}

void GeodesicProbe::validate() const {
    for (std::size_t k = 1; k < t_samples.size(); ++k)
        if (!(t_samples[k] > t_samples[k - 1]))
            throw Error("geodesic probe: t-samples must be strictly increasing");
    for (double t : t_samples)
        for (const auto& p : grid.points())
            if (classify(es, Complex(0, t), p).tag != PolarizationTag::Kahler)
                throw Error("geodesic probe: non-Kahler point in the probe set");
}

Point moser_inverse(const EvolvedStructure& es, Complex tau, const Point& q) {
    return flow_inverse(es, tau, q);
}

double mabuchi_path_value(const GeodesicProbe& probe, double t, const Point& q) {
    Point p = moser_inverse(probe.es, Complex(0, t), q);
    return probe.pf.kappa(Complex(0, t), p) - evaluate(probe.sys->kappa0, q).real();
}

double velocity_check(const GeodesicProbe& probe, double t, const Point& q) {
    double dphi = (mabuchi_path_value(probe, t + probe.dt, q) -
                   mabuchi_path_value(probe, t - probe.dt, q)) /
                  (2 * probe.dt);
    Point p = moser_inverse(probe.es, Complex(0, t), q);
    return std::abs(dphi + 2.0 * evaluate(probe.sys->h, p).real());
}

namespace {

// metric of omega_t = omega + i d0 dbar0 phi_t with respect to J_0 at q,
// with the phi_t Hessian taken by central differences in the initial chart
Eigen::MatrixXd omega_t_matrix(const GeodesicProbe& probe, double t, const Point& q, double dx) {
    const HamSystem& sys = *probe.sys;
    int n = sys.n();
    Eigen::MatrixXcd frame0 = sys.chart_frame(q);
    Eigen::VectorXcd center(n);
    for (int j = 0; j < n; ++j) center(j) = evaluate(sys.chart[j], q);
    auto phi_at = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXcd target(n);
        for (int j = 0; j < n; ++j) target(j) = Complex(u(j), u(n + j));
        return mabuchi_path_value(probe, t, invert_initial_chart(sys, target, q));
    };
    Eigen::VectorXd u0(2 * n);
    for (int j = 0; j < n; ++j) {
        u0(j) = center(j).real();
        u0(n + j) = center(j).imag();
    }
    Eigen::MatrixXd hess(2 * n, 2 * n);
    double f0 = phi_at(u0);
    for (int a = 0; a < 2 * n; ++a) {
        Eigen::VectorXd up = u0, dn = u0;
        up(a) += dx;
        dn(a) -= dx;
        hess(a, a) = (phi_at(up) - 2 * f0 + phi_at(dn)) / (dx * dx);
    }
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = a + 1; b < 2 * n; ++b) {
            Eigen::VectorXd pp = u0, pm = u0, mp = u0, mm = u0;
            pp(a) += dx; pp(b) += dx;
            pm(a) += dx; pm(b) -= dx;
            mp(a) -= dx; mp(b) += dx;
            mm(a) -= dx; mm(b) -= dx;
            hess(a, b) = hess(b, a) =
                (phi_at(pp) - phi_at(pm) - phi_at(mp) + phi_at(mm)) / (4 * dx * dx);
        }
    }
    // initial metric coefficients of omega plus the phi Hessian
    Eigen::MatrixXcd in_frame = two_form_in_frame(sys.omega_matrix(q), frame0);
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Complex ddbar = 0.25 * Complex(hess(j, k) + hess(n + j, n + k),
                                           hess(j, n + k) - hess(n + j, k));
            g(j, k) = Complex(0, -1) * in_frame(j, n + k) + ddbar;
        }
    // back to a real 2-form matrix: omega_t = frame0^T W' frame0 with the
    // (1,1) block i g and its antisymmetric mirror
    Eigen::MatrixXcd wp = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            wp(j, n + k) = Complex(0, 1) * g(j, k);
            wp(n + k, j) = -Complex(0, 1) * g(j, k);
        }
    Eigen::MatrixXcd w = frame0.transpose() * wp * frame0;
    if (w.imag().cwiseAbs().maxCoeff() > 1e-9)
        throw Error("assembled omega_t is not real");
    return w.real();
}

Eigen::MatrixXd initial_complex_structure(const HamSystem& sys, const Point& q) {
    int n = sys.n();
    Eigen::MatrixXcd a = sys.chart_jacobian(q);
    Eigen::MatrixXd r(2 * n, 2 * n);
    r.topRows(n) = a.real();
    r.bottomRows(n) = a.imag();
    Eigen::MatrixXd jstd = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    jstd.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    jstd.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    return r.fullPivLu().solve(jstd * r);
}

}  // namespace

GeodesicResidual geodesic_residual(const GeodesicProbe& probe, double t, const Point& q) {
    const HamSystem& sys = *probe.sys;
    int d = sys.dim();
    double dt = probe.dt, dx = probe.dx;
    auto phi = [&](double tt, const Point& r) { return mabuchi_path_value(probe, tt, r); };
    double ddot = (phi(t + dt, q) - 2 * phi(t, q) + phi(t - dt, q)) / (dt * dt);

    auto phidot = [&](const Point& r) { return (phi(t + dt, r) - phi(t - dt, r)) / (2 * dt); };
    Eigen::VectorXd dphidot(d);
    for (int m = 0; m < d; ++m) {
        Point up = q, dn = q;
        up.set(sys.coords()[m], q.at(sys.coords()[m]) + dx);
        dn.set(sys.coords()[m], q.at(sys.coords()[m]) - dx);
        dphidot(m) = (phidot(up) - phidot(dn)) / (2 * dx);
    }

    Eigen::MatrixXd gamma = omega_t_matrix(probe, t, q, dx) * initial_complex_structure(sys, q);
    gamma = (gamma + gamma.transpose()).eval() / 2.0;
    Eigen::LLT<Eigen::MatrixXd> llt(gamma);
    if (llt.info() != Eigen::Success) throw Error("left Kahler region");
    double grad_norm2 = dphidot.dot(llt.solve(dphidot));

    GeodesicResidual out;
    out.ddot_phi = ddot;
    out.grad_term = 0.5 * grad_norm2;
    out.residual = std::abs(out.ddot_phi - out.grad_term);
    return out;
}

RefinementReport geodesic_refinement(const GeodesicProbe& probe, double t, const Point& q) {
    GeodesicProbe fine = probe;
    fine.dt = probe.dt / 2;
    fine.dx = probe.dx / 2;
    RefinementReport r;
    r.coarse = geodesic_residual(probe, t, q).residual;
    r.fine = geodesic_residual(fine, t, q).residual;
    r.observed_order = std::log2(r.coarse / r.fine);
    return r;
}

Eigen::MatrixXd pulled_back_omega(const EvolvedStructure& es, Complex tau, const Point& q) {
    const HamSystem& sys = es.system();
    int n = sys.n();
    Point p = flow_inverse(es, tau, q);
    // real Jacobian of phi_tau at p: chart(phi(p)) = z_tau(p)
    Eigen::MatrixXcd a = es.chart_jacobian(tau, p);
    Eigen::MatrixXd rf(2 * n, 2 * n);
    rf.topRows(n) = a.real();
    rf.bottomRows(n) = a.imag();
    Eigen::MatrixXcd a0 = sys.chart_jacobian(q);
    Eigen::MatrixXd rc(2 * n, 2 * n);
    rc.topRows(n) = a0.real();
    rc.bottomRows(n) = a0.imag();
    Eigen::MatrixXd dphi = rc.fullPivLu().solve(rf);
    Eigen::MatrixXd dphi_inv = dphi.fullPivLu().inverse();
    return dphi_inv.transpose() * sys.omega_matrix(p) * dphi_inv;
}

double type_one_one_defect(const HamSystem& sys, const Eigen::MatrixXd& form, const Point& q) {
    Eigen::MatrixXcd in_frame = two_form_in_frame(form, sys.chart_frame(q));
    return in_frame.topLeftCorner(sys.n(), sys.n()).cwiseAbs().maxCoeff();
}

double kahler_identity_residual(const EvolvedStructure& es, Complex tau, const Point& p) {
    const HamSystem& sys = es.system();
    int d = sys.dim();
    Eigen::MatrixXd gamma = riemannian_metric_at(es, tau, p);
    gamma = (gamma + gamma.transpose()).eval() / 2.0;
    Eigen::VectorXd xh(d), dh(d);
    for (int m = 0; m < d; ++m) {
        xh(m) = evaluate(sys.field().components[m], p).real();
        dh(m) = evaluate(differentiate(sys.h, sys.coords()[m]), p).real();
    }
    double field_norm = xh.dot(gamma * xh);
    double grad_norm = dh.dot(gamma.fullPivLu().solve(dh));
    return std::abs(field_norm - grad_norm);
}

MetricPathSample metric_path_sample(const GeodesicProbe& probe, double t, const Point& q) {
    MetricPathSample s;
    Point p = moser_inverse(probe.es, Complex(0, t), q);
    s.kappa = probe.pf.kappa(Complex(0, t), p);
    s.phi = s.kappa - evaluate(probe.sys->kappa0, q).real();
    s.omega_t = pulled_back_omega(probe.es, Complex(0, t), q);
    s.gamma = s.omega_t * initial_complex_structure(*probe.sys, q);
    return s;
}

MabuchiSpeed mabuchi_speed_quadrature(const GeodesicProbe& probe, double t) {
    const GridSpec& grid = probe.grid;
    double cell = 1.0;
    for (const auto& ax : grid.axes) cell *= (ax.hi - ax.lo) / (ax.count - 1);
    long factorial = 1;
    for (int j = 2; j <= probe.sys->n(); ++j) factorial *= j;
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        Point q = grid.point(k);
        double dphi = (mabuchi_path_value(probe, t + probe.dt, q) -
                       mabuchi_path_value(probe, t - probe.dt, q)) /
                      (2 * probe.dt);
        // volume density of omega_t^n / n! against the coordinate volume
        Eigen::MatrixXd w = pulled_back_omega(probe.es, Complex(0, t), q);
        double density = std::sqrt(std::abs(w.determinant())) / factorial;
        double weight = 1.0;
        for (std::size_t ax = 0; ax < grid.axes.size(); ++ax) {
            // trapezoid weights: half at the box faces
            std::size_t idx = k;
            for (std::size_t b = grid.axes.size(); b-- > ax + 1;) idx /= grid.axes[b].count;
            std::size_t j = idx % grid.axes[ax].count;
            if (j == 0 || j + 1 == static_cast<std::size_t>(grid.axes[ax].count)) weight *= 0.5;
        }
        acc += weight * dphi * dphi * density;
    }
    return {acc * cell, "box quadrature on a noncompact model; not a Mabuchi-metric value"};
}

}  // namespace kahlerflow
