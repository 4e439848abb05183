#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kahlerflow/errors.hpp"
#include "kahlerflow/rational.hpp"

namespace kahlerflow {

// Immutable symbolic expression over named real coordinates, closed under
// +, *, integer powers, sin/cos/exp, complex constants and conjugation.
// Coordinates always stand for real values, so conjugation acts only on
// constants once an expression is normalized.
class Expr {
public:
    enum class Kind { Constant, Symbol, Sum, Product, Power, Sin, Cos, Exp, Conj };

    Expr();  // zero

    static Expr constant(RationalComplex c);
    static Expr constant(long v) { return constant(RationalComplex(v)); }
    static Expr constant(double v) { return constant(RationalComplex(v)); }
    static Expr rational(long num, long den);
    static Expr i();
    static Expr symbol(const std::string& name);

    Kind kind() const;
    const RationalComplex& value() const;     // Constant
    const std::string& name() const;          // Symbol
    const std::vector<Expr>& children() const;
    int exponent() const;                     // Power

    bool is_zero_constant() const;

    // raw structural equality (same tree shape and payloads)
    bool same_tree(const Expr& other) const;

    std::string str() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr pow(const Expr&, int);
    friend Expr sin(const Expr&);
    friend Expr cos(const Expr&);
    friend Expr exp(const Expr&);
    friend Expr conj(const Expr&);
    friend struct ExprAccess;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int n);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr conj(const Expr& e);

inline Expr operator+(const Expr& a, long b) { return a + Expr::constant(b); }
inline Expr operator+(long a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, long b) { return a - Expr::constant(b); }
inline Expr operator*(const Expr& a, long b) { return a * Expr::constant(b); }
inline Expr operator*(long a, const Expr& b) { return Expr::constant(a) * b; }

// Point binds coordinate symbols to values. Values are complex so the same
// evaluator serves both real points of M and points of the complexification.
class Point {
public:
    Point() = default;
    Point(std::initializer_list<std::pair<const std::string, Complex>> init) : values_(init) {}

    void set(const std::string& name, Complex v) { values_[name] = v; }
    Complex at(const std::string& name) const;
    bool has(const std::string& name) const { return values_.count(name) != 0; }
    const std::map<std::string, Complex>& values() const { return values_; }

private:
    std::map<std::string, Complex> values_;
};

// Rectangular sampling grid with a deterministic enumeration order
// (axes in declared order, last axis fastest).
struct GridSpec {
    struct Axis {
        std::string name;
        double lo;
        double hi;
        int count;
    };
    std::vector<Axis> axes;

    GridSpec() = default;
    GridSpec(std::initializer_list<Axis> a) : axes(a) { validate(); }

    void validate() const;
    std::size_t size() const;
    Point point(std::size_t index) const;
    std::vector<Point> points() const;
};

// exact partial derivative with respect to a real coordinate symbol
Expr differentiate(const Expr& e, const std::string& coord);
// validated variant: `coord` must be one of `coords`
Expr differentiate(const Expr& e, const std::string& coord, const std::vector<std::string>& coords);

// simultaneous substitution; symbols absent from the map are untouched
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

Complex evaluate(const Expr& e, const Point& p);

// Canonical form: sums and products flattened, like monomials collected over
// a fixed atom ordering, constants folded exactly, conjugation pushed onto
// constants. Idempotent. Trigonometric content is kept atomic (no identities
// beyond constant folding and odd/even argument sign normalization).
Expr normalize(const Expr& e);

// normalize-and-compare
bool equivalent(const Expr& a, const Expr& b);

std::vector<std::string> free_symbols(const Expr& e);

// Infix syntax: `i` imaginary unit, `^` integer powers, sin/cos/exp/conj calls.
Expr parse_expr(const std::string& text);

}  // namespace kahlerflow
