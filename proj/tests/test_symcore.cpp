#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kahlerflow/expr.hpp"
#include "test_support.hpp"

using namespace kahlerflow;

namespace {
const Expr x = Expr::symbol("x");
const Expr y = Expr::symbol("y");
const Expr t = Expr::symbol("t");
}  // namespace

TEST_CASE("differentiation rules") {
    CHECK(equivalent(differentiate(x * pow(y, 2), "y"), 2 * x * y));
    // chain rule through the trig factor of the quartic-model metric data
    CHECK(equivalent(differentiate(sin(2 * t * x * y), "x"), 2 * t * y * cos(2 * t * x * y)));
    CHECK(normalize(differentiate(Expr::rational(7, 3), "x")).is_zero_constant());
    CHECK(equivalent(differentiate(exp(x * y), "x"), y * exp(x * y)));
    CHECK(equivalent(differentiate(pow(x, -2), "x"), Expr::constant(-2L) * pow(x, -3)));
    CHECK(equivalent(differentiate(conj(Expr::i() * x), "x"), Expr::constant(-1L) * Expr::i()));
}

TEST_CASE("mixed partials commute after normalization") {
    std::mt19937 rng(7);
    for (int k = 0; k < 50; ++k) {
        Expr f = kftest::random_polynomial(rng, {"x", "y", "t"}, 4, 4, true);
        Expr dxy = differentiate(differentiate(f, "x"), "y");
        Expr dyx = differentiate(differentiate(f, "y"), "x");
        CHECK(equivalent(dxy, dyx));
    }
}

TEST_CASE("validated differentiate names the unknown symbol") {
    CHECK_THROWS_WITH_AS(differentiate(x + y, "q", {"x", "y"}),
                         "unknown coordinate symbol 'q'", Error);
}

TEST_CASE("substitution") {
    Expr r = Expr::symbol("r");
    CHECK(equivalent(substitute(x + Expr::i() * y, {{"x", x + r * y}}), x + r * y + Expr::i() * y));
    Expr f = sin(x * y) + pow(x, 3);
    CHECK(substitute(f, {}).same_tree(f));
    CHECK(equivalent(substitute(pow(x, 2), {{"x", x + t * y}}),
                     pow(x, 2) + 2 * t * x * y + pow(t, 2) * pow(y, 2)));
    // simultaneous, not sequential
    CHECK(equivalent(substitute(x * y, {{"x", y}, {"y", x}}), x * y));
}

TEST_CASE("evaluation") {
    // linear-model chart value: x + (tau0+tau)y at tau0=i, tau=1, (x,y)=(1,2)
    Expr chart = x + (Expr::i() + Expr::constant(1L)) * y;
    Complex v = evaluate(chart, {{"x", 1.0}, {"y", 2.0}});
    CHECK(std::abs(v - Complex(3.0, 2.0)) < 1e-15);

    v = evaluate(conj(x + Expr::i() * y), {{"x", 1.0}, {"y", 1.0}});
    CHECK(std::abs(v - Complex(1.0, -1.0)) < 1e-15);

    // evolved quartic potential at t=0 reduces to the initial potential
    Expr kappa = cos(2 * t * x * y) * (pow(x, 2) + pow(y, 2)) * Expr::rational(1, 2) +
                 t * pow(x, 2) * pow(y, 2);
    v = evaluate(kappa, {{"x", 1.0}, {"y", 1.0}, {"t", 0.0}});
    CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-15);

    CHECK_THROWS_AS(evaluate(x + y, {{"x", 1.0}}), EvalError);
    CHECK_THROWS_AS(evaluate(exp(exp(exp(x))), {{"x", 1e9}}), EvalError);
}

TEST_CASE("evaluation accepts complex coordinate values") {
    Complex v = evaluate(pow(x, 2), {{"x", Complex(0.0, 1.0)}});
    CHECK(std::abs(v - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("normalize recognizes exact zeros") {
    CHECK(normalize(x * y - y * x).is_zero_constant());
    CHECK(normalize(pow(x + y, 2) - pow(x, 2) - 2 * x * y - pow(y, 2)).is_zero_constant());
    CHECK(normalize(conj(x + Expr::i() * y) - (x - Expr::i() * y)).is_zero_constant());
    CHECK(normalize(sin(x - x)).is_zero_constant());
    CHECK(normalize(cos(x * y) - cos(y * x)).is_zero_constant());
    CHECK(normalize(conj(conj(sin(x) + Expr::i())) - sin(x) - Expr::i()).is_zero_constant());
}

TEST_CASE("normalize does not invent trig identities") {
    Expr e = normalize(pow(sin(x), 2) + pow(cos(x), 2));
    CHECK(!e.is_zero_constant());
    CHECK(!e.same_tree(Expr::constant(1L)));
}

TEST_CASE("normalize is idempotent") {
    std::mt19937 rng(11);
    for (int k = 0; k < 60; ++k) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"}, 5, 4, true);
        Expr g = sin(f) * kftest::random_polynomial(rng, {"x", "y"}, 3, 2) + conj(f) * pow(x + y, -1);
        Expr n = normalize(g);
        CHECK(normalize(n).same_tree(n));
    }
}

TEST_CASE("Leibniz rule on random polynomials") {
    std::mt19937 rng(13);
    for (int k = 0; k < 80; ++k) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"});
        Expr g = kftest::random_polynomial(rng, {"x", "y"});
        Expr lhs = differentiate(f * g, "x");
        Expr rhs = differentiate(f, "x") * g + f * differentiate(g, "x");
        CHECK(normalize(lhs - rhs).is_zero_constant());
    }
}

TEST_CASE("evaluation is a homomorphism on products") {
    std::mt19937 rng(17);
    for (int k = 0; k < 60; ++k) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"}, 4, 3, true);
        Expr g = kftest::random_polynomial(rng, {"x", "y"}, 4, 3, true);
        Point p = kftest::random_point(rng, {"x", "y"});
        Complex lhs = evaluate(f * g, p);
        Complex rhs = evaluate(f, p) * evaluate(g, p);
        double scale = std::max(1.0, std::abs(rhs));
        CHECK(std::abs(lhs - rhs) / scale < 1e-14);
    }
}

TEST_CASE("substitute and evaluate are consistent") {
    std::mt19937 rng(19);
    for (int k = 0; k < 60; ++k) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"}, 4, 3);
        Expr g = kftest::random_polynomial(rng, {"x", "y"}, 3, 2);
        Point p = kftest::random_point(rng, {"x", "y"});
        Complex lhs = evaluate(substitute(f, {{"x", g}}), p);
        Point q = p;
        q.set("x", evaluate(g, p));
        Complex rhs = evaluate(f, q);
        double scale = std::max(1.0, std::abs(rhs));
        CHECK(std::abs(lhs - rhs) / scale < 1e-13);
    }
}

TEST_CASE("parser round trips") {
    Expr e = parse_expr("x + (1/2)*i*y^2 - sin(2*t*x*y)");
    Expr direct = x + Expr::rational(1, 2) * Expr::i() * pow(y, 2) - sin(2 * t * x * y);
    CHECK(equivalent(e, direct));

    CHECK(equivalent(parse_expr("conj(x + i*y)"), x - Expr::i() * y));
    CHECK(equivalent(parse_expr("x^-2"), pow(x, -2)));
    CHECK(equivalent(parse_expr("x^(-2)"), pow(x, -2)));
    CHECK(equivalent(parse_expr("y/x^2"), y * pow(x, -2)));
    CHECK(std::abs(evaluate(parse_expr("exp(x)*exp(-x)*y"), {{"x", 0.7}, {"y", 2.0}}) -
                   Complex(2.0, 0.0)) < 1e-14);
    CHECK(equivalent(parse_expr("0.125"), Expr::rational(1, 8)));
    CHECK(equivalent(parse_expr("2.5e-1"), Expr::rational(1, 4)));
    // parse of printed canonical form agrees
    Expr n = normalize(direct);
    CHECK(equivalent(parse_expr(n.str()), n));
}

TEST_CASE("parser reports line and column") {
    try {
        parse_expr("x +\n y * sinh(x)");
        CHECK(false);
    } catch (const ParseError& err) {
        CHECK(err.line == 2);
        CHECK(err.col > 1);
    }
    CHECK_THROWS_AS(parse_expr("x + "), ParseError);
    CHECK_THROWS_AS(parse_expr("(x"), ParseError);
    CHECK_THROWS_AS(parse_expr("x ^ y"), ParseError);
}

TEST_CASE("grid enumeration is deterministic") {
    GridSpec grid{{"x", -1.0, 1.0, 3}, {"y", 0.0, 1.0, 2}};
    CHECK(grid.size() == 6);
    auto pts = grid.points();
    CHECK(pts[0].at("x") == Complex(-1.0));
    CHECK(pts[0].at("y") == Complex(0.0));
    CHECK(pts[1].at("x") == Complex(-1.0));
    CHECK(pts[1].at("y") == Complex(1.0));
    CHECK(pts[2].at("x") == Complex(0.0));
    CHECK(pts[5].at("x") == Complex(1.0));
    CHECK_THROWS_AS((GridSpec{{"x", 1.0, -1.0, 3}}), ConfigError);
    CHECK_THROWS_AS((GridSpec{{"x", 0.0, 1.0, 1}}), ConfigError);
}
