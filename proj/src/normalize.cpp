#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "kahlerflow/expr.hpp"

// Canonical form: an expression becomes a polynomial over "atoms" with exact
// rational-complex coefficients. Atoms are coordinate symbols, elementary
// function applications (whose arguments are canonical polynomials), and
// inverted compound polynomials. Conjugation is pushed all the way down to
// constants, which is exact because coordinates are real symbols.

namespace kahlerflow {
namespace {

struct Poly;
using PolyPtr = std::shared_ptr<const Poly>;

enum class AtomKind { Symbol, Sin, Cos, Exp, Compound };

struct Atom {
    AtomKind kind;
    std::string name;  // Symbol
    PolyPtr arg;       // Sin/Cos/Exp, Compound (only with negative exponents)
};

int compare(const Poly& a, const Poly& b);

int compare(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (a.kind == AtomKind::Symbol) return a.name.compare(b.name);
    return compare(*a.arg, *b.arg);
}

// product of atoms with nonzero integer exponents, sorted by atom
struct Mono {
    std::vector<std::pair<Atom, int>> factors;
};

int compare(const Mono& a, const Mono& b) {
    std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t k = 0; k < n; ++k) {
        int c = compare(a.factors[k].first, b.factors[k].first);
        if (c != 0) return c;
        if (a.factors[k].second != b.factors[k].second)
            return a.factors[k].second < b.factors[k].second ? -1 : 1;
    }
    if (a.factors.size() != b.factors.size())
        return a.factors.size() < b.factors.size() ? -1 : 1;
    return 0;
}

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return compare(a, b) < 0; }
};

struct Poly {
    std::map<Mono, RationalComplex, MonoLess> terms;  // zero coefficients never stored
};

int compare(const Poly& a, const Poly& b) {
    auto ia = a.terms.begin();
    auto ib = b.terms.begin();
    for (; ia != a.terms.end() && ib != b.terms.end(); ++ia, ++ib) {
        int c = compare(ia->first, ib->first);
        if (c != 0) return c;
        c = ia->second.compare(ib->second);
        if (c != 0) return c;
    }
    if (ia != a.terms.end()) return 1;
    if (ib != b.terms.end()) return -1;
    return 0;
}

Poly poly_const(RationalComplex c) {
    Poly p;
    if (!c.is_zero()) p.terms.emplace(Mono{}, std::move(c));
    return p;
}

bool is_const(const Poly& p, RationalComplex* out = nullptr) {
    if (p.terms.empty()) {
        if (out) *out = RationalComplex(0);
        return true;
    }
    if (p.terms.size() == 1 && p.terms.begin()->first.factors.empty()) {
        if (out) *out = p.terms.begin()->second;
        return true;
    }
    return false;
}

void add_term(Poly& p, const Mono& m, const RationalComplex& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = p.terms.emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) p.terms.erase(it);
    }
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.terms) add_term(r, m, c);
    return r;
}

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    auto ia = a.factors.begin();
    auto ib = b.factors.begin();
    while (ia != a.factors.end() && ib != b.factors.end()) {
        int c = compare(ia->first, ib->first);
        if (c < 0) {
            r.factors.push_back(*ia++);
        } else if (c > 0) {
            r.factors.push_back(*ib++);
        } else {
            int e = ia->second + ib->second;
            if (e != 0) r.factors.emplace_back(ia->first, e);
            ++ia;
            ++ib;
        }
    }
    r.factors.insert(r.factors.end(), ia, a.factors.end());
    r.factors.insert(r.factors.end(), ib, b.factors.end());
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) add_term(r, mono_mul(ma, mb), ca * cb);
    return r;
}

Poly poly_scale(const Poly& a, const RationalComplex& c) {
    Poly r;
    for (const auto& [m, v] : a.terms) add_term(r, m, v * c);
    return r;
}

Poly poly_neg(const Poly& a) { return poly_scale(a, RationalComplex(-1L)); }

bool leading_negative(const Poly& p) {
    if (p.terms.empty()) return false;
    const RationalComplex& c = p.terms.begin()->second;
    return c.re < 0 || (c.re == 0 && c.im < 0);
}

// Builds the polynomial for fn(arg): constant folding at exact zeros plus
// odd/even sign normalization of sin/cos arguments.
Poly make_func(AtomKind kind, Poly arg);

// Compound atoms carry a sign-normalized base; `sign` receives the factor
// extracted from the base (+1 or -1).
Atom make_compound(Poly base, int& sign) {
    sign = 1;
    if (leading_negative(base)) {
        base = poly_neg(base);
        sign = -1;
    }
    return Atom{AtomKind::Compound, {}, std::make_shared<const Poly>(std::move(base))};
}

Poly poly_pow(const Poly& base, int n) {
    if (n == 0) return poly_const(RationalComplex(1));
    if (n < 0) {
        RationalComplex c;
        if (is_const(base, &c)) {
            if (c.is_zero()) throw Error("negative power of zero expression");
            return poly_const(c.pow(n));
        }
        if (base.terms.size() == 1) {
            // invert a single monomial exactly
            const auto& [m, coeff] = *base.terms.begin();
            Mono inv;
            for (const auto& [atom, e] : m.factors) inv.factors.emplace_back(atom, -e);
            Poly r;
            add_term(r, inv, coeff.inverse());
            return poly_pow(r, -n);
        }
        int sign = 1;
        Atom atom = make_compound(base, sign);
        Mono m;
        m.factors.emplace_back(std::move(atom), n);
        Poly r;
        add_term(r, m, RationalComplex((sign < 0 && (n & 1)) ? -1L : 1L));
        return r;
    }
    Poly acc = poly_const(RationalComplex(1));
    Poly b = base;
    while (n > 0) {
        if (n & 1) acc = poly_mul(acc, b);
        if (n >>= 1) b = poly_mul(b, b);
    }
    return acc;
}

Poly make_func(AtomKind kind, Poly arg) {
    RationalComplex c;
    if (is_const(arg, &c) && c.is_zero()) {
        switch (kind) {
            case AtomKind::Sin:
                return poly_const(RationalComplex(0));
            case AtomKind::Cos:
            case AtomKind::Exp:
                return poly_const(RationalComplex(1));
            default:
                break;
        }
    }
    RationalComplex outer(1);
    if (kind == AtomKind::Sin || kind == AtomKind::Cos) {
        if (leading_negative(arg)) {
            arg = poly_neg(arg);
            if (kind == AtomKind::Sin) outer = RationalComplex(-1L);
        }
    }
    Atom atom{kind, {}, std::make_shared<const Poly>(std::move(arg))};
    Mono m;
    m.factors.emplace_back(std::move(atom), 1);
    Poly r;
    add_term(r, m, outer);
    return r;
}

Poly poly_conj(const Poly& a);

// conj of atom^e; returns the canonical replacement polynomial
Poly atom_conj_pow(const Atom& atom, int e) {
    switch (atom.kind) {
        case AtomKind::Symbol: {
            Mono m;
            m.factors.emplace_back(atom, e);
            Poly r;
            add_term(r, m, RationalComplex(1));
            return r;
        }
        case AtomKind::Sin:
        case AtomKind::Cos:
        case AtomKind::Exp:
            return poly_pow(make_func(atom.kind, poly_conj(*atom.arg)), e);
        case AtomKind::Compound: {
            int sign = 1;
            Atom na = make_compound(poly_conj(*atom.arg), sign);
            Mono m;
            m.factors.emplace_back(std::move(na), e);
            Poly r;
            add_term(r, m, RationalComplex((sign < 0 && (e & 1)) ? -1L : 1L));
            return r;
        }
    }
    return {};
}

Poly poly_conj(const Poly& a) {
    Poly r;
    for (const auto& [m, c] : a.terms) {
        Poly term = poly_const(c.conj());
        for (const auto& [atom, e] : m.factors) term = poly_mul(term, atom_conj_pow(atom, e));
        r = poly_add(r, term);
    }
    return r;
}

Poly to_poly(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            return poly_const(e.value());
        case Expr::Kind::Symbol: {
            Mono m;
            m.factors.emplace_back(Atom{AtomKind::Symbol, e.name(), nullptr}, 1);
            Poly r;
            add_term(r, m, RationalComplex(1));
            return r;
        }
        case Expr::Kind::Sum: {
            Poly r;
            for (const auto& c : e.children()) r = poly_add(r, to_poly(c));
            return r;
        }
        case Expr::Kind::Product: {
            Poly r = poly_const(RationalComplex(1));
            for (const auto& c : e.children()) r = poly_mul(r, to_poly(c));
            return r;
        }
        case Expr::Kind::Power:
            return poly_pow(to_poly(e.children()[0]), e.exponent());
        case Expr::Kind::Sin:
            return make_func(AtomKind::Sin, to_poly(e.children()[0]));
        case Expr::Kind::Cos:
            return make_func(AtomKind::Cos, to_poly(e.children()[0]));
        case Expr::Kind::Exp:
            return make_func(AtomKind::Exp, to_poly(e.children()[0]));
        case Expr::Kind::Conj:
            return poly_conj(to_poly(e.children()[0]));
    }
    return {};
}

Expr to_expr(const Poly& p);

Expr atom_to_expr(const Atom& atom) {
    switch (atom.kind) {
        case AtomKind::Symbol:
            return Expr::symbol(atom.name);
        case AtomKind::Sin:
            return sin(to_expr(*atom.arg));
        case AtomKind::Cos:
            return cos(to_expr(*atom.arg));
        case AtomKind::Exp:
            return exp(to_expr(*atom.arg));
        case AtomKind::Compound:
            return to_expr(*atom.arg);
    }
    return {};
}

Expr to_expr(const Poly& p) {
    if (p.terms.empty()) return Expr();
    std::vector<Expr> terms;
    for (const auto& [m, c] : p.terms) {
        std::vector<Expr> factors;
        if (!(c == RationalComplex(1)) || m.factors.empty())
            factors.push_back(Expr::constant(c));
        for (const auto& [atom, e] : m.factors) factors.push_back(pow(atom_to_expr(atom), e));
        Expr t = factors[0];
        for (std::size_t k = 1; k < factors.size(); ++k) t = t * factors[k];
        terms.push_back(t);
    }
    Expr s = terms[0];
    for (std::size_t k = 1; k < terms.size(); ++k) s = s + terms[k];
    return s;
}

}  // namespace

Expr normalize(const Expr& e) { return to_expr(to_poly(e)); }

}  // namespace kahlerflow
