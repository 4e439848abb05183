#include "kahlerflow/lie.hpp"

#include <cmath>
#include <limits>

namespace kahlerflow {

Derivation::Derivation(std::vector<std::string> coords_, std::vector<Expr> components_)
    : coords(std::move(coords_)), components(std::move(components_)) {
    if (coords.size() != components.size())
        throw Error("derivation: component count does not match coordinate count");
}

Expr Derivation::apply(const Expr& f) const {
    Expr s;
    for (std::size_t k = 0; k < coords.size(); ++k)
        s = s + components[k] * differentiate(f, coords[k]);
    return normalize(s);
}

Derivation lie_bracket(const Derivation& x, const Derivation& y) {
    if (x.coords != y.coords) throw Error("lie_bracket: coordinate mismatch");
    std::vector<Expr> comps;
    comps.reserve(x.coords.size());
    for (std::size_t m = 0; m < x.coords.size(); ++m)
        comps.push_back(normalize(x.apply(y.components[m]) - y.apply(x.components[m])));
    return Derivation(x.coords, std::move(comps));
}

TauSeries::TauSeries(TimeTag tag, std::vector<Expr> coeffs) : tag_(tag), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error("series must have at least the order-0 coefficient");
}

TauSeries lie_exp(const Derivation& field, const Expr& seed, int order) {
    if (order < 0) throw Error("lie_exp: order must be >= 0");
    std::vector<Expr> coeffs;
    coeffs.reserve(order + 1);
    coeffs.push_back(normalize(seed));
    for (int k = 0; k < order; ++k)
        coeffs.push_back(normalize(field.apply(coeffs.back()) * Expr::rational(1, k + 1)));
    return TauSeries(TimeTag::Tau, std::move(coeffs));
}

Complex eval_series(const TauSeries& s, Complex tau, const Point& p) {
    Complex v = s.tag() == TimeTag::TauBar ? std::conj(tau) : tau;
    Complex acc = 0.0;
    for (int k = s.order(); k >= 0; --k) acc = acc * v + evaluate(s.coeff(k), p);
    if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
        throw EvalError("non-finite series value");
    return acc;
}

TauSeries conjugate_series(const TauSeries& s) {
    std::vector<Expr> coeffs;
    coeffs.reserve(s.order() + 1);
    for (const auto& c : s.coeffs()) coeffs.push_back(normalize(conj(c)));
    return TauSeries(s.tag() == TimeTag::Tau ? TimeTag::TauBar : TimeTag::Tau, std::move(coeffs));
}

double estimate_radius(const TauSeries& s, const Point& p) {
    int n = s.order();
    if (n < 4) throw Error("estimate_radius: series order must be >= 4");
    int window = (n + 1) / 2;
    double sup = 0.0;
    for (int k = n - window + 1; k <= n; ++k) {
        double mag = std::abs(evaluate(s.coeff(k), p));
        if (mag == 0.0) continue;
        sup = std::max(sup, std::pow(mag, 1.0 / k));
    }
    if (sup == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / sup;
}

TauSeries series_product(const TauSeries& a, const TauSeries& b) {
    if (a.tag() != b.tag()) throw Error("series_product: time-tag mismatch");
    int order = std::min(a.order(), b.order());
    std::vector<Expr> coeffs(order + 1);
    for (int k = 0; k <= order; ++k) {
        Expr s;
        for (int j = 0; j <= k; ++j) s = s + a.coeff(j) * b.coeff(k - j);
        coeffs[k] = normalize(s);
    }
    return TauSeries(a.tag(), std::move(coeffs));
}

TauSeries series_add(const TauSeries& a, const TauSeries& b) {
    if (a.tag() != b.tag()) throw Error("series_add: time-tag mismatch");
    int order = std::min(a.order(), b.order());
    std::vector<Expr> coeffs(order + 1);
    for (int k = 0; k <= order; ++k) coeffs[k] = normalize(a.coeff(k) + b.coeff(k));
    return TauSeries(a.tag(), std::move(coeffs));
}

TauSeries series_scale(const TauSeries& a, const RationalComplex& c) {
    std::vector<Expr> coeffs;
    coeffs.reserve(a.order() + 1);
    for (const auto& e : a.coeffs()) coeffs.push_back(normalize(Expr::constant(c) * e));
    return TauSeries(a.tag(), std::move(coeffs));
}

Expr series_to_expr(const TauSeries& s, const RationalComplex& tau) {
    RationalComplex v = s.tag() == TimeTag::TauBar ? tau.conj() : tau;
    Expr acc;
    RationalComplex vk(1);
    for (int k = 0; k <= s.order(); ++k) {
        acc = acc + Expr::constant(vk) * s.coeff(k);
        vk = vk * v;
    }
    return normalize(acc);
}

SymplecticForm SymplecticForm::standard(const std::vector<std::string>& position,
                                        const std::vector<std::string>& momentum) {
    if (position.size() != momentum.size())
        throw Error("standard symplectic form needs equally many positions and momenta");
    SymplecticForm w;
    std::size_t n = position.size();
    w.coords = position;
    w.coords.insert(w.coords.end(), momentum.begin(), momentum.end());
    w.entries.assign(2 * n, std::vector<Expr>(2 * n, Expr()));
    for (std::size_t j = 0; j < n; ++j) {
        w.entries[j][n + j] = Expr::constant(1L);
        w.entries[n + j][j] = Expr::constant(-1L);
    }
    return w;
}

void SymplecticForm::validate() const {
    std::size_t n = coords.size();
    if (entries.size() != n) throw Error("symplectic form: matrix size mismatch");
    for (const auto& row : entries)
        if (row.size() != n) throw Error("symplectic form: matrix size mismatch");
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k <= j; ++k)
            if (!equivalent(entries[j][k], Expr::constant(-1L) * entries[k][j]))
                throw Error("symplectic form: matrix is not antisymmetric");
}

std::vector<std::vector<RationalComplex>> SymplecticForm::constant_entries() const {
    std::vector<std::vector<RationalComplex>> m(entries.size());
    for (std::size_t j = 0; j < entries.size(); ++j) {
        for (const auto& e : entries[j]) {
            Expr n = normalize(e);
            if (n.kind() != Expr::Kind::Constant)
                throw Error("symplectic form entry is not constant: " + e.str());
            m[j].push_back(n.value());
        }
    }
    return m;
}

namespace {

// exact Gauss-Jordan inverse over rational complex numbers
std::vector<std::vector<RationalComplex>> invert(std::vector<std::vector<RationalComplex>> m) {
    std::size_t n = m.size();
    std::vector<std::vector<RationalComplex>> inv(n, std::vector<RationalComplex>(n));
    for (std::size_t j = 0; j < n; ++j) inv[j][j] = RationalComplex(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) throw Error("symplectic form is singular");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        RationalComplex d = m[col][col].inverse();
        for (std::size_t k = 0; k < n; ++k) {
            m[col][k] = m[col][k] * d;
            inv[col][k] = inv[col][k] * d;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            RationalComplex f = m[row][col];
            for (std::size_t k = 0; k < n; ++k) {
                m[row][k] = m[row][k] - f * m[col][k];
                inv[row][k] = inv[row][k] - f * inv[col][k];
            }
        }
    }
    return inv;
}

}  // namespace

Derivation hamiltonian_field(const Expr& h, const SymplecticForm& omega) {
    std::size_t n = omega.coords.size();
    auto w = omega.constant_entries();
    // components solve sum_j a^j w_jk = dh/dx^k, i.e. a = (w^T)^{-1} grad h
    std::vector<std::vector<RationalComplex>> wt(n, std::vector<RationalComplex>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) wt[j][k] = w[k][j];
    auto m = invert(std::move(wt));
    std::vector<Expr> grad;
    grad.reserve(n);
    for (const auto& c : omega.coords) grad.push_back(differentiate(h, c));
    std::vector<Expr> comps(n);
    for (std::size_t j = 0; j < n; ++j) {
        Expr s;
        for (std::size_t k = 0; k < n; ++k) s = s + Expr::constant(m[j][k]) * grad[k];
        comps[j] = normalize(s);
    }
    return Derivation(omega.coords, std::move(comps));
}

Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticForm& omega) {
    Derivation xf = hamiltonian_field(f, omega);
    Derivation xg = hamiltonian_field(g, omega);
    Expr s;
    for (std::size_t j = 0; j < omega.coords.size(); ++j)
        for (std::size_t k = 0; k < omega.coords.size(); ++k)
            s = s + xf.components[j] * omega.entries[j][k] * xg.components[k];
    return normalize(s);
}

}  // namespace kahlerflow
