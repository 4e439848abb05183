#include "kahlerflow/evolve.hpp"

#include <cmath>

namespace kahlerflow {

std::string to_string(PolarizationTag tag) {
    switch (tag) {
        case PolarizationTag::Kahler: return "kahler";
        case PolarizationTag::PseudoKahler: return "pseudo_kahler";
        case PolarizationTag::Real: return "real";
        case PolarizationTag::Mixed: return "mixed";
        case PolarizationTag::Degenerate: return "degenerate";
    }
    return "?";
}

EvolvedStructure::EvolvedStructure(const HamSystem& sys, int order) : sys_(&sys), order_(order) {
    const Derivation& field = sys.field();
    for (const auto& z : sys.chart) {
        chart_.push_back(lie_exp(field, z, order));
        conj_chart_.push_back(conjugate_series(chart_.back()));
    }
    auto differentiate_series = [&](const TauSeries& s) {
        std::vector<TauSeries> out;
        for (const auto& c : sys.coords()) {
            std::vector<Expr> coeffs;
            coeffs.reserve(s.order() + 1);
            for (const auto& ck : s.coeffs()) coeffs.push_back(normalize(differentiate(ck, c)));
            out.emplace_back(s.tag(), std::move(coeffs));
        }
        return out;
    };
    for (const auto& s : chart_) dchart_.push_back(differentiate_series(s));
    for (const auto& s : conj_chart_) dconj_chart_.push_back(differentiate_series(s));
}

EvolvedStructure evolve_chart(const HamSystem& sys, int order) {
    return EvolvedStructure(sys, order);
}

Eigen::VectorXcd EvolvedStructure::chart_value(Complex tau, const Point& p) const {
    Eigen::VectorXcd v(chart_.size());
    for (std::size_t j = 0; j < chart_.size(); ++j) v(j) = eval_series(chart_[j], tau, p);
    return v;
}

Eigen::VectorXcd EvolvedStructure::conj_chart_value(Complex tau, const Point& p) const {
    Eigen::VectorXcd v(conj_chart_.size());
    for (std::size_t j = 0; j < conj_chart_.size(); ++j) v(j) = eval_series(conj_chart_[j], tau, p);
    return v;
}

Eigen::MatrixXcd EvolvedStructure::chart_jacobian(Complex tau, const Point& p) const {
    std::size_t d = sys_->dim();
    Eigen::MatrixXcd a(chart_.size(), d);
    for (std::size_t j = 0; j < chart_.size(); ++j)
        for (std::size_t m = 0; m < d; ++m) a(j, m) = eval_series(dchart_[j][m], tau, p);
    return a;
}

Eigen::MatrixXcd EvolvedStructure::conj_chart_jacobian(Complex tau, const Point& p) const {
    std::size_t d = sys_->dim();
    Eigen::MatrixXcd a(conj_chart_.size(), d);
    for (std::size_t j = 0; j < conj_chart_.size(); ++j)
        for (std::size_t m = 0; m < d; ++m) a(j, m) = eval_series(dconj_chart_[j][m], tau, p);
    return a;
}

Eigen::MatrixXcd EvolvedStructure::frame(Complex tau, const Point& p) const {
    Eigen::MatrixXcd top = chart_jacobian(tau, p);
    Eigen::MatrixXcd bot = conj_chart_jacobian(tau, p);
    Eigen::MatrixXcd c(top.rows() + bot.rows(), top.cols());
    c.topRows(top.rows()) = top;
    c.bottomRows(bot.rows()) = bot;
    return c;
}

namespace {

int svd_rank(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double cutoff = kRankThreshold * sv(0);
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > cutoff) ++rank;
    return rank;
}

}  // namespace

HermitianMetric metric_at(const EvolvedStructure& es, Complex tau, const Point& p) {
    const HamSystem& sys = es.system();
    int n = sys.n();
    HermitianMetric out;
    Eigen::MatrixXcd a = es.chart_jacobian(tau, p);
    Eigen::MatrixXcd c(2 * n, 2 * n);
    c.topRows(n) = a;
    c.bottomRows(n) = es.conj_chart_jacobian(tau, p);
    out.cls.rank_chart = svd_rank(a);
    out.cls.rank_combined = svd_rank(c);
    if (out.cls.rank_combined < 2 * n) {
        out.valid = false;
        if (out.cls.rank_chart < n)
            out.cls.tag = PolarizationTag::Degenerate;
        else if (out.cls.rank_combined == n)
            out.cls.tag = PolarizationTag::Real;
        else
            out.cls.tag = PolarizationTag::Mixed;
        return out;
    }
    Eigen::MatrixXcd in_frame = two_form_in_frame(sys.omega_matrix(p), c);
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) g(j, k) = Complex(0, -1) * in_frame(j, n + k);
    out.valid = true;
    out.g = g;
    out.hermitian_defect = (g - g.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig((g + g.adjoint()) / 2.0);
    double cutoff = kRankThreshold * eig.eigenvalues().cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
        double lambda = eig.eigenvalues()(k);
        if (lambda > cutoff)
            ++out.cls.n_pos;
        else if (lambda < -cutoff)
            ++out.cls.n_neg;
        else
            ++out.cls.n_zero;
    }
    if (out.cls.n_pos == n)
        out.cls.tag = PolarizationTag::Kahler;
    else if (out.cls.n_zero == 0)
        out.cls.tag = PolarizationTag::PseudoKahler;
    else
        out.cls.tag = PolarizationTag::Mixed;
    return out;
}

PolarizationClass classify(const EvolvedStructure& es, Complex tau, const Point& p) {
    return metric_at(es, tau, p).cls;
}

Eigen::MatrixXcd frame_kernel(const EvolvedStructure& es, Complex tau, const Point& p) {
    Eigen::MatrixXcd c = es.frame(tau, p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = sv.size() ? kRankThreshold * sv(0) : 0.0;
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > cutoff) ++rank;
    return svd.matrixV().rightCols(c.cols() - rank);
}

Eigen::MatrixXd riemannian_metric_at(const EvolvedStructure& es, Complex tau, const Point& p) {
    const HamSystem& sys = es.system();
    int n = sys.n();
    Eigen::MatrixXcd a = es.chart_jacobian(tau, p);
    Eigen::MatrixXd r(2 * n, 2 * n);
    r.topRows(n) = a.real();
    r.bottomRows(n) = a.imag();
    Eigen::MatrixXd jstd = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    jstd.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    jstd.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    auto lu = r.fullPivLu();
    if (!lu.isInvertible())
        throw Error("evolved chart is degenerate at this point; no Riemannian metric");
    Eigen::MatrixXd j_tau = lu.solve(jstd * r);
    return sys.omega_matrix(p) * j_tau;
}

namespace {

void combinations(int offset, int remaining, int total, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = offset; k <= total - remaining; ++k) {
        cur.push_back(k);
        combinations(k + 1, remaining - 1, total, cur, out);
        cur.pop_back();
    }
}

}  // namespace

CanonicalForm evolve_canonical_form(const EvolvedStructure& es, Complex tau, const Point& p) {
    const HamSystem& sys = es.system();
    int n = sys.n();
    int d = sys.dim();
    Eigen::MatrixXcd a = es.chart_jacobian(tau, p);
    CanonicalForm out;
    std::vector<int> cur;
    combinations(0, n, d, cur, out.index_sets);
    out.coeffs.resize(static_cast<Eigen::Index>(out.index_sets.size()));
    for (std::size_t s = 0; s < out.index_sets.size(); ++s) {
        Eigen::MatrixXcd minor(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) minor(j, k) = a(j, out.index_sets[s][k]);
        out.coeffs(static_cast<Eigen::Index>(s)) = minor.determinant();
    }
    // expansion in the initial chart basis; the dz^1..dz^n block carries the
    // holomorphic Jacobian determinant
    Eigen::MatrixXcd frame0 = sys.chart_frame(p);
    Eigen::MatrixXcd b = frame0.transpose().fullPivLu().solve(a.transpose()).transpose();
    out.holomorphic_det = b.leftCols(n).determinant();
    return out;
}

namespace {

// Newton solve of F(xi) = target over real points, where F rows are complex
// chart functions. Iterates to near machine precision, keeps the best seen.
Point newton_chart_solve(const std::vector<std::string>& coords,
                         const std::function<Eigen::VectorXcd(const Point&)>& value,
                         const std::function<Eigen::MatrixXcd(const Point&)>& jacobian,
                         const Eigen::VectorXcd& target, const Point& seed,
                         const char* what) {
    int n = static_cast<int>(target.size());
    int d = static_cast<int>(coords.size());
    Eigen::VectorXd xi(d);
    for (int m = 0; m < d; ++m) xi(m) = seed.at(coords[m]).real();
    auto to_point = [&](const Eigen::VectorXd& v) {
        Point p;
        for (int m = 0; m < d; ++m) p.set(coords[m], v(m));
        return p;
    };
    double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_xi = xi;
    int stall = 0;
    for (int iter = 0; iter < 50; ++iter) {
        Point p = to_point(xi);
        Eigen::VectorXcd r = value(p) - target;
        double res = r.cwiseAbs().maxCoeff();
        if (res < best) {
            best = res;
            best_xi = xi;
            stall = 0;
        } else if (++stall >= 2) {
            break;
        }
        if (res < 1e-15 * scale) break;
        Eigen::MatrixXcd a = jacobian(p);
        Eigen::MatrixXd jr(2 * n, d);
        jr.topRows(n) = a.real();
        jr.bottomRows(n) = a.imag();
        Eigen::VectorXd rr(2 * n);
        rr.head(n) = r.real();
        rr.tail(n) = r.imag();
        Eigen::VectorXd step = jr.fullPivLu().solve(rr);
        if (!step.allFinite()) break;
        xi -= step;
    }
    if (!(best <= 1e-10 * scale)) throw NewtonError(std::string(what) + ": no convergence", best);
    return to_point(best_xi);
}

}  // namespace

Point invert_evolved_chart(const EvolvedStructure& es, Complex tau, const Eigen::VectorXcd& target,
                           const Point& seed) {
    return newton_chart_solve(
        es.system().coords(), [&](const Point& p) { return es.chart_value(tau, p); },
        [&](const Point& p) { return es.chart_jacobian(tau, p); }, target, seed,
        "evolved chart inversion");
}

Point invert_initial_chart(const HamSystem& sys, const Eigen::VectorXcd& target, const Point& seed) {
    auto value = [&](const Point& p) {
        Eigen::VectorXcd v(sys.n());
        for (int j = 0; j < sys.n(); ++j) v(j) = evaluate(sys.chart[j], p);
        return v;
    };
    return newton_chart_solve(
        sys.coords(), value, [&](const Point& p) { return sys.chart_jacobian(p); }, target, seed,
        "initial chart inversion");
}

Point flow_forward(const EvolvedStructure& es, Complex tau, const Point& p) {
    return invert_initial_chart(es.system(), es.chart_value(tau, p), p);
}

Point flow_inverse(const EvolvedStructure& es, Complex tau, const Point& q, const Point* seed) {
    const HamSystem& sys = es.system();
    Eigen::VectorXcd target(sys.n());
    for (int j = 0; j < sys.n(); ++j) target(j) = evaluate(sys.chart[j], q);
    return invert_evolved_chart(es, tau, target, seed ? *seed : q);
}

Point real_flow_point(const HamSystem& sys, int order, double s, const Point& p) {
    Point out;
    for (const auto& c : sys.coords()) {
        TauSeries series = lie_exp(sys.field(), Expr::symbol(c), order);
        Complex v = eval_series(series, s, p);
        out.set(c, v.real());
    }
    return out;
}

}  // namespace kahlerflow
