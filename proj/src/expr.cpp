#include "kahlerflow/expr.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace kahlerflow {

std::string RationalComplex::str() const {
    std::ostringstream os;
    auto rat = [](const Rational& r) {
        std::ostringstream s;
        s << r;
        return s.str();
    };
    if (im == 0) return rat(re);
    std::string imag = (im == 1) ? "i" : (im == -1) ? "-i" : rat(im) + "*i";
    if (re == 0) return imag;
    if (im > 0) return "(" + rat(re) + "+" + (im == 1 ? "i" : rat(im) + "*i") + ")";
    return "(" + rat(re) + "-" + (im == -1 ? "i" : rat(-im) + "*i") + ")";
}

RationalComplex RationalComplex::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    RationalComplex acc(1);
    RationalComplex base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

struct Expr::Node {
    Kind kind;
    RationalComplex value;      // Constant
    std::string name;           // Symbol
    int iexp = 0;               // Power
    std::vector<Expr> kids;
};

struct ExprAccess {
    static Expr make(Expr::Kind kind, std::vector<Expr> kids, RationalComplex value = {},
                     std::string name = {}, int iexp = 0) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = kind;
        n->value = std::move(value);
        n->name = std::move(name);
        n->iexp = iexp;
        n->kids = std::move(kids);
        return Expr(std::move(n));
    }
};

Expr::Expr() : Expr(ExprAccess::make(Kind::Constant, {}, RationalComplex(0))) {}

Expr Expr::constant(RationalComplex c) { return ExprAccess::make(Kind::Constant, {}, std::move(c)); }
Expr Expr::rational(long num, long den) { return constant(RationalComplex(Rational(num, den))); }
Expr Expr::i() { return constant(RationalComplex::i()); }
Expr Expr::symbol(const std::string& name) {
    return ExprAccess::make(Kind::Symbol, {}, {}, name);
}

Expr::Kind Expr::kind() const { return node_->kind; }
const RationalComplex& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }
int Expr::exponent() const { return node_->iexp; }

bool Expr::is_zero_constant() const {
    return node_->kind == Kind::Constant && node_->value.is_zero();
}

bool Expr::same_tree(const Expr& other) const {
    if (node_ == other.node_) return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Constant:
            return a.value == b.value;
        case Kind::Symbol:
            return a.name == b.name;
        case Kind::Power:
            if (a.iexp != b.iexp) return false;
            break;
        default:
            break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t k = 0; k < a.kids.size(); ++k)
        if (!a.kids[k].same_tree(b.kids[k])) return false;
    return true;
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero_constant()) return b;
    if (b.is_zero_constant()) return a;
    return ExprAccess::make(Expr::Kind::Sum, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero_constant() || b.is_zero_constant()) return Expr();
    return ExprAccess::make(Expr::Kind::Product, {a, b});
}

Expr operator-(const Expr& a) { return Expr::constant(-1L) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr pow(const Expr& base, int n) {
    if (n == 0) return Expr::constant(1L);
    if (n == 1) return base;
    return ExprAccess::make(Expr::Kind::Power, {base}, {}, {}, n);
}

Expr sin(const Expr& e) { return ExprAccess::make(Expr::Kind::Sin, {e}); }
Expr cos(const Expr& e) { return ExprAccess::make(Expr::Kind::Cos, {e}); }
Expr exp(const Expr& e) { return ExprAccess::make(Expr::Kind::Exp, {e}); }
Expr conj(const Expr& e) { return ExprAccess::make(Expr::Kind::Conj, {e}); }

std::string Expr::str() const {
    const Node& n = *node_;
    auto wrap = [](const Expr& child, bool need) {
        return need ? "(" + child.str() + ")" : child.str();
    };
    switch (n.kind) {
        case Kind::Constant:
            return n.value.str();
        case Kind::Symbol:
            return n.name;
        case Kind::Sum: {
            std::string s;
            for (std::size_t k = 0; k < n.kids.size(); ++k) {
                if (k) s += " + ";
                s += n.kids[k].str();
            }
            return s;
        }
        case Kind::Product: {
            std::string s;
            for (std::size_t k = 0; k < n.kids.size(); ++k) {
                if (k) s += "*";
                s += wrap(n.kids[k], n.kids[k].kind() == Kind::Sum);
            }
            return s;
        }
        case Kind::Power: {
            bool paren = n.kids[0].kind() != Kind::Symbol;
            std::string e = std::to_string(n.iexp);
            if (n.iexp < 0) e = "(" + e + ")";
            return wrap(n.kids[0], paren) + "^" + e;
        }
        case Kind::Sin:
            return "sin(" + n.kids[0].str() + ")";
        case Kind::Cos:
            return "cos(" + n.kids[0].str() + ")";
        case Kind::Exp:
            return "exp(" + n.kids[0].str() + ")";
        case Kind::Conj:
            return "conj(" + n.kids[0].str() + ")";
    }
    return {};
}

Complex Point::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw EvalError("unbound symbol '" + name + "'");
    return it->second;
}

void GridSpec::validate() const {
    for (const auto& ax : axes) {
        if (!(ax.lo < ax.hi))
            throw ConfigError("grid axis '" + ax.name + "': lo must be < hi");
        if (ax.count < 2)
            throw ConfigError("grid axis '" + ax.name + "': count must be >= 2");
    }
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.count);
    return n;
}

Point GridSpec::point(std::size_t index) const {
    Point p;
    for (std::size_t k = axes.size(); k-- > 0;) {
        const Axis& ax = axes[k];
        std::size_t j = index % ax.count;
        index /= ax.count;
        double v = ax.lo + (ax.hi - ax.lo) * static_cast<double>(j) / (ax.count - 1);
        p.set(ax.name, v);
    }
    return p;
}

std::vector<Point> GridSpec::points() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(point(k));
    return out;
}

Expr differentiate(const Expr& e, const std::string& coord) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            return Expr();
        case Expr::Kind::Symbol:
            return e.name() == coord ? Expr::constant(1L) : Expr();
        case Expr::Kind::Sum: {
            Expr s;
            for (const auto& c : e.children()) s = s + differentiate(c, coord);
            return s;
        }
        case Expr::Kind::Product: {
            Expr s;
            const auto& kids = e.children();
            for (std::size_t k = 0; k < kids.size(); ++k) {
                Expr term = differentiate(kids[k], coord);
                if (term.is_zero_constant()) continue;
                for (std::size_t j = 0; j < kids.size(); ++j)
                    if (j != k) term = term * kids[j];
                s = s + term;
            }
            return s;
        }
        case Expr::Kind::Power: {
            const Expr& b = e.children()[0];
            int n = e.exponent();
            return Expr::constant(static_cast<long>(n)) * pow(b, n - 1) * differentiate(b, coord);
        }
        case Expr::Kind::Sin:
            return cos(e.children()[0]) * differentiate(e.children()[0], coord);
        case Expr::Kind::Cos:
            return Expr::constant(-1L) * sin(e.children()[0]) * differentiate(e.children()[0], coord);
        case Expr::Kind::Exp:
            return e * differentiate(e.children()[0], coord);
        case Expr::Kind::Conj:
            return conj(differentiate(e.children()[0], coord));
    }
    return Expr();
}

Expr differentiate(const Expr& e, const std::string& coord, const std::vector<std::string>& coords) {
    for (const auto& c : coords)
        if (c == coord) return differentiate(e, coord);
    throw Error("unknown coordinate symbol '" + coord + "'");
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case Expr::Kind::Constant:
            return e;
        case Expr::Kind::Symbol: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case Expr::Kind::Sum: {
            Expr s;
            for (const auto& c : e.children()) s = s + substitute(c, bindings);
            return s;
        }
        case Expr::Kind::Product: {
            Expr s = substitute(e.children()[0], bindings);
            for (std::size_t k = 1; k < e.children().size(); ++k)
                s = s * substitute(e.children()[k], bindings);
            return s;
        }
        case Expr::Kind::Power:
            return pow(substitute(e.children()[0], bindings), e.exponent());
        case Expr::Kind::Sin:
            return sin(substitute(e.children()[0], bindings));
        case Expr::Kind::Cos:
            return cos(substitute(e.children()[0], bindings));
        case Expr::Kind::Exp:
            return exp(substitute(e.children()[0], bindings));
        case Expr::Kind::Conj:
            return conj(substitute(e.children()[0], bindings));
    }
    return e;
}

namespace {

Complex pow_int(Complex base, int n) {
    if (n < 0) return 1.0 / pow_int(base, -n);
    Complex acc(1.0, 0.0);
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

void check_finite(Complex v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw EvalError("non-finite value in evaluation");
}

}  // namespace

Complex evaluate(const Expr& e, const Point& p) {
    Complex v;
    switch (e.kind()) {
        case Expr::Kind::Constant:
            v = e.value().to_complex();
            break;
        case Expr::Kind::Symbol:
            v = p.at(e.name());
            break;
        case Expr::Kind::Sum: {
            v = 0.0;
            for (const auto& c : e.children()) v += evaluate(c, p);
            break;
        }
        case Expr::Kind::Product: {
            v = 1.0;
            for (const auto& c : e.children()) v *= evaluate(c, p);
            break;
        }
        case Expr::Kind::Power:
            v = pow_int(evaluate(e.children()[0], p), e.exponent());
            break;
        case Expr::Kind::Sin:
            v = std::sin(evaluate(e.children()[0], p));
            break;
        case Expr::Kind::Cos:
            v = std::cos(evaluate(e.children()[0], p));
            break;
        case Expr::Kind::Exp:
            v = std::exp(evaluate(e.children()[0], p));
            break;
        case Expr::Kind::Conj:
            v = std::conj(evaluate(e.children()[0], p));
            break;
    }
    check_finite(v);
    return v;
}

std::vector<std::string> free_symbols(const Expr& e) {
    std::set<std::string> seen;
    std::vector<const Expr*> stack{&e};
    while (!stack.empty()) {
        const Expr* cur = stack.back();
        stack.pop_back();
        if (cur->kind() == Expr::Kind::Symbol) seen.insert(cur->name());
        for (const auto& c : cur->children()) stack.push_back(&c);
    }
    return {seen.begin(), seen.end()};
}

bool equivalent(const Expr& a, const Expr& b) {
    return normalize(a).same_tree(normalize(b));
}

}  // namespace kahlerflow
