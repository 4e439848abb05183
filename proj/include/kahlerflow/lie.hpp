#pragma once

#include <vector>

#include "kahlerflow/expr.hpp"

namespace kahlerflow {

// First-order differential operator X = sum_k a^k d/dx^k.
struct Derivation {
    std::vector<std::string> coords;
    std::vector<Expr> components;

    Derivation() = default;
    Derivation(std::vector<std::string> coords, std::vector<Expr> components);

    // X(f), normalized
    Expr apply(const Expr& f) const;
};

// Lie bracket [X, Y] of two derivations over the same coordinates.
Derivation lie_bracket(const Derivation& x, const Derivation& y);

enum class TimeTag { Tau, TauBar };

// Truncated power series in the flow time: coefficient k holds X^k(f)/k!.
// A TauBar tag means the series variable is the conjugate time.
class TauSeries {
public:
    TauSeries(TimeTag tag, std::vector<Expr> coeffs);

    TimeTag tag() const { return tag_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Expr& coeff(int k) const { return coeffs_.at(k); }
    const std::vector<Expr>& coeffs() const { return coeffs_; }

private:
    TimeTag tag_;
    std::vector<Expr> coeffs_;
};

TauSeries lie_exp(const Derivation& field, const Expr& seed, int order);

Complex eval_series(const TauSeries& s, Complex tau, const Point& p);

TauSeries conjugate_series(const TauSeries& s);

// Root-test heuristic on the trailing half of the coefficients; +infinity when
// every sampled coefficient vanishes at p (terminating/entire case).
double estimate_radius(const TauSeries& s, const Point& p);

// Cauchy product truncated to the smaller order; tags must match.
TauSeries series_product(const TauSeries& a, const TauSeries& b);

TauSeries series_add(const TauSeries& a, const TauSeries& b);
TauSeries series_scale(const TauSeries& a, const RationalComplex& c);

// exact symbolic partial sum at a rational time value
Expr series_to_expr(const TauSeries& s, const RationalComplex& tau);

// Constant antisymmetric symplectic form sum_{j<k} w_jk dx^j ^ dx^k.
struct SymplecticForm {
    std::vector<std::string> coords;
    std::vector<std::vector<Expr>> entries;  // entries[j][k] = w(d_j, d_k)

    static SymplecticForm standard(const std::vector<std::string>& position,
                                   const std::vector<std::string>& momentum);

    void validate() const;
    // entries as an exact constant matrix; throws if any entry is non-constant
    std::vector<std::vector<RationalComplex>> constant_entries() const;
};

// Solves i_X w = dh for X against a constant invertible w (exact arithmetic).
Derivation hamiltonian_field(const Expr& h, const SymplecticForm& omega);

// {f,g} = w(X_f, X_g), normalized
Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticForm& omega);

}  // namespace kahlerflow
