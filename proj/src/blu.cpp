#include "kahlerflow/blu.hpp"

#include <cmath>

namespace kahlerflow {

DoubledPoint embed(const HamSystem& sys, const Point& p) {
    const auto& coords = sys.coords();
    DoubledPoint xi(coords.size());
    for (std::size_t m = 0; m < coords.size(); ++m) xi(m) = p.at(coords[m]);
    return xi;
}

DoubledPoint sigma(const DoubledPoint& xi) { return xi.conjugate(); }

bool on_real_locus(const DoubledPoint& xi, double tol) {
    return xi.imag().cwiseAbs().maxCoeff() <= tol;
}

Expr analytic_continuation(const Expr& e) {
    Expr n = normalize(e);
    // normalize eliminates conjugations over real coordinates; anything left
    // would continue incorrectly, so reject it
    std::vector<const Expr*> stack{&n};
    while (!stack.empty()) {
        const Expr* cur = stack.back();
        stack.pop_back();
        if (cur->kind() == Expr::Kind::Conj)
            throw Error("expression has a conjugation not reducible over real coordinates");
        for (const auto& c : cur->children()) stack.push_back(&c);
    }
    return n;
}

Complex doubled_eval(const HamSystem& sys, const Expr& continued, const DoubledPoint& xi) {
    Point p;
    const auto& coords = sys.coords();
    for (std::size_t m = 0; m < coords.size(); ++m) p.set(coords[m], xi(m));
    return evaluate(continued, p);
}

ComplexFlowField::ComplexFlowField(const HamSystem& sys, Complex tau) : sys_(&sys), tau_(tau) {
    for (const auto& c : sys.field().components) components_.push_back(analytic_continuation(c));
    h_continued_ = analytic_continuation(sys.h);
}

DoubledPoint ComplexFlowField::rhs(const DoubledPoint& xi) const {
    DoubledPoint v(xi.size());
    Point p;
    const auto& coords = sys_->coords();
    for (std::size_t m = 0; m < coords.size(); ++m) p.set(coords[m], xi(m));
    for (std::size_t m = 0; m < components_.size(); ++m) v(m) = -tau_ * evaluate(components_[m], p);
    return v;
}

Complex ComplexFlowField::energy(const DoubledPoint& xi) const {
    return doubled_eval(*sys_, h_continued_, xi);
}

double ComplexFlowField::tangency_defect(const DoubledPoint& xi) const {
    return rhs(xi).imag().cwiseAbs().maxCoeff();
}

DoubledPoint flow_eta(const ComplexFlowField& field, const DoubledPoint& start, double t,
                      const FlowOptions& opts) {
    // Dormand-Prince 5(4) pair
    static const double a21 = 1. / 5;
    static const double a31 = 3. / 40, a32 = 9. / 40;
    static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
    static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                        a54 = -212. / 729;
    static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                        a64 = 49. / 176, a65 = -5103. / 18656;
    static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192, b5 = -2187. / 6784,
                        b6 = 11. / 84;
    static const double e1 = 35. / 384 - 5179. / 57600, e3 = 500. / 1113 - 7571. / 16695,
                        e4 = 125. / 192 - 393. / 640, e5 = -2187. / 6784 + 92097. / 339200,
                        e6 = 11. / 84 - 187. / 2100, e7 = -1. / 40;

    if (t == 0.0) return start;
    double direction = t > 0 ? 1.0 : -1.0;
    double remaining = std::abs(t);
    DoubledPoint y = start;
    DoubledPoint k1 = field.rhs(y);
    double h = opts.initial_step > 0
                   ? opts.initial_step
                   : std::min(remaining, 0.01 * std::max(1.0, 1.0 / (k1.cwiseAbs().maxCoeff() + 1e-30)));
    h = std::min(h, remaining);
    long steps = 0;
    double done = 0.0;
    while (remaining > 0) {
        if (++steps > opts.max_steps)
            throw IntegratorError("flow_eta: step budget exhausted", direction * done);
        if (h < 1e-14 * std::abs(t))
            throw IntegratorError("flow_eta: step size underflow", direction * done);
        double hs = direction * h;
        DoubledPoint k2 = field.rhs(y + hs * (a21 * k1));
        DoubledPoint k3 = field.rhs(y + hs * (a31 * k1 + a32 * k2));
        DoubledPoint k4 = field.rhs(y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        DoubledPoint k5 = field.rhs(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        DoubledPoint k6 = field.rhs(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        DoubledPoint ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        DoubledPoint k7 = field.rhs(ynew);
        DoubledPoint err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double scale = opts.tol * std::max(1.0, std::max(y.cwiseAbs().maxCoeff(),
                                                         ynew.cwiseAbs().maxCoeff()));
        double err_norm = err.cwiseAbs().maxCoeff() / scale;
        if (err_norm <= 1.0) {
            y = ynew;
            k1 = k7;  // first-same-as-last
            done += h;
            remaining -= h;
        }
        double factor = err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
        h = std::min(h, remaining);
        if (!y.allFinite()) throw IntegratorError("flow_eta: state blew up", direction * done);
    }
    return y;
}

Point project_pi0(const HamSystem& sys, const DoubledPoint& xi) {
    Eigen::VectorXcd zc(sys.n());
    for (int j = 0; j < sys.n(); ++j) zc(j) = doubled_eval(sys, analytic_continuation(sys.chart[j]), xi);
    Point seed;
    const auto& coords = sys.coords();
    for (std::size_t m = 0; m < coords.size(); ++m) seed.set(coords[m], xi(m).real());
    return invert_initial_chart(sys, zc, seed);
}

namespace {

Point leaf_project(const EvolvedStructure& es, Complex flow_time, const DoubledPoint& at,
                   const Point& seed) {
    const HamSystem& sys = es.system();
    // leaf constant: the flow-invariant continued chart functions evaluated at
    // the integrated complexified point
    Eigen::VectorXcd constant(sys.n());
    Point doubled;
    const auto& coords = sys.coords();
    for (std::size_t m = 0; m < coords.size(); ++m) doubled.set(coords[m], at(m));
    for (int j = 0; j < sys.n(); ++j)
        constant(j) = eval_series(es.chart_series(j), flow_time, doubled);
    try {
        return invert_evolved_chart(es, flow_time, constant, seed);
    } catch (const NewtonError&) {
        throw LeafProjectionError("leaf does not meet M (real/mixed regime)");
    }
}

}  // namespace

Point blu_forward(const EvolvedStructure& es, Complex tau, double t, const Point& p,
                  const FlowOptions& opts) {
    const HamSystem& sys = es.system();
    if (t == 0.0) return p;
    ComplexFlowField field(sys, tau);
    DoubledPoint end = flow_eta(field, embed(sys, p), t, opts);
    Complex flow_time = tau * t;
    try {
        return leaf_project(es, flow_time, end, p);
    } catch (const LeafProjectionError&) {
        // continuation in t: reuse the half-time projection as the seed
        if (std::abs(t) < 1e-3) throw;
        Point mid = blu_forward(es, tau, t / 2, p, opts);
        return leaf_project(es, flow_time, end, mid);
    }
}

Point varphi_via_pi0(const EvolvedStructure& es, Complex tau, double t, const Point& p,
                     const FlowOptions& opts) {
    const HamSystem& sys = es.system();
    if (t == 0.0) return p;
    ComplexFlowField field(sys, tau);
    DoubledPoint end = flow_eta(field, embed(sys, p), -t, opts);
    return project_pi0(sys, end);
}

double diagram_check(const EvolvedStructure& es, Complex tau, double t, const GridSpec& grid,
                     const FlowOptions& opts) {
    const HamSystem& sys = es.system();
    double worst = 0.0;
    for (const auto& p : grid.points()) {
        Point back = blu_forward(es, tau, t, p, opts);
        Point round = flow_forward(es, tau * t, back);
        for (const auto& c : sys.coords())
            worst = std::max(worst, std::abs(round.at(c) - p.at(c)));
    }
    return worst;
}

}  // namespace kahlerflow
