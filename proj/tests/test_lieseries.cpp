#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kahlerflow/lie.hpp"
#include "test_support.hpp"

using namespace kahlerflow;

namespace {

const Expr x = Expr::symbol("x");
const Expr y = Expr::symbol("y");

SymplecticForm plane() { return SymplecticForm::standard({"x"}, {"y"}); }

Derivation quartic_field() {
    // h = (xy)^2/2
    return hamiltonian_field(Expr::rational(1, 2) * pow(x * y, 2), plane());
}

long factorial(int k) {
    long f = 1;
    for (int j = 2; j <= k; ++j) f *= j;
    return f;
}

// truncated series power via repeated Cauchy products
TauSeries series_pow(const TauSeries& s, int n, int order) {
    std::vector<Expr> one(order + 1);
    one[0] = Expr::constant(1L);
    TauSeries acc(TimeTag::Tau, one);
    for (int k = 0; k < n; ++k) acc = series_product(acc, s);
    return acc;
}

}  // namespace

TEST_CASE("hamiltonian field fixes the sign convention") {
    // free-particle flow generated by y d/dx
    Derivation f = hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), plane());
    CHECK(equivalent(f.components[0], y));
    CHECK(normalize(f.components[1]).is_zero_constant());

    // quartic model: X_h = xy(x d/dx - y d/dy)
    Derivation q = quartic_field();
    CHECK(equivalent(q.components[0], pow(x, 2) * y));
    CHECK(equivalent(q.components[1], Expr::constant(-1L) * x * pow(y, 2)));

    Derivation z = hamiltonian_field(Expr::constant(5L), plane());
    CHECK(normalize(z.components[0]).is_zero_constant());
    CHECK(normalize(z.components[1]).is_zero_constant());
}

TEST_CASE("singular symplectic matrix is rejected") {
    SymplecticForm bad;
    bad.coords = {"x", "y"};
    bad.entries = {{Expr(), Expr()}, {Expr(), Expr()}};
    CHECK_THROWS_AS(hamiltonian_field(y, bad), Error);
}

TEST_CASE("linear model series terminates at order one") {
    Derivation f = hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), plane());
    Expr tau0 = Expr::i();
    TauSeries s = lie_exp(f, x + tau0 * y, 8);
    CHECK(equivalent(s.coeff(0), x + Expr::i() * y));
    CHECK(equivalent(s.coeff(1), y));
    for (int k = 2; k <= 8; ++k) CHECK(normalize(s.coeff(k)).is_zero_constant());
}

TEST_CASE("quartic model coefficients follow the closed pattern") {
    // X^k(x+iy) = (xy)^k (x+iy) for even k and (xy)^k (x-iy) for odd k
    Derivation f = quartic_field();
    int order = 7;
    TauSeries s = lie_exp(f, x + Expr::i() * y, order);
    for (int k = 0; k <= order; ++k) {
        Expr base = (k % 2 == 0) ? x + Expr::i() * y : x - Expr::i() * y;
        Expr expected = Expr::rational(1, factorial(k)) * pow(x * y, k) * base;
        CHECK(normalize(s.coeff(k) - expected).is_zero_constant());
    }
}

TEST_CASE("order zero series is the seed") {
    TauSeries s = lie_exp(quartic_field(), sin(x) * y, 0);
    CHECK(s.order() == 0);
    CHECK(equivalent(s.coeff(0), sin(x) * y));
}

TEST_CASE("series recurrence (k+1) c_{k+1} = X(c_k) holds exactly") {
    Derivation f = quartic_field();
    TauSeries s = lie_exp(f, x + Expr::i() * y, 10);
    for (int k = 0; k < 10; ++k) {
        Expr lhs = Expr::constant(static_cast<long>(k + 1)) * s.coeff(k + 1);
        CHECK(normalize(lhs - f.apply(s.coeff(k))).is_zero_constant());
    }
}

TEST_CASE("series evaluation") {
    Derivation f = hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), plane());
    TauSeries s = lie_exp(f, x + Expr::i() * y, 4);
    // closed form x + (tau0+tau) y with tau0=i, tau=1-i at (2,3)
    Complex v = eval_series(s, Complex(1.0, -1.0), {{"x", 2.0}, {"y", 3.0}});
    CHECK(std::abs(v - Complex(5.0, 0.0)) < 1e-15);
    CHECK(std::abs(eval_series(s, 0.0, {{"x", 2.0}, {"y", 3.0}}) - Complex(2.0, 3.0)) < 1e-15);

    TauSeries q = lie_exp(quartic_field(), x + Expr::i() * y, 12);
    Point p{{"x", 1.0}, {"y", 1.0}};
    Complex got = eval_series(q, Complex(0.0, 0.3), p);
    Complex want = std::exp(Complex(0.0, 0.3)) + Complex(0.0, 1.0) * std::exp(Complex(0.0, -0.3));
    CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("conjugate series flips the time tag") {
    Derivation f = hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), plane());
    TauSeries s = lie_exp(f, x, 3);  // real seed, real coefficients
    TauSeries c = conjugate_series(s);
    CHECK(c.tag() == TimeTag::TauBar);
    for (int k = 0; k <= 3; ++k) CHECK(normalize(c.coeff(k) - s.coeff(k)).is_zero_constant());
    // evaluation uses the conjugate time
    Complex tau(0.2, 0.7);
    Point p{{"x", 0.4}, {"y", -1.1}};
    CHECK(std::abs(eval_series(c, tau, p) - std::conj(eval_series(s, tau, p))) < 1e-14);

    TauSeries cc = conjugate_series(c);
    CHECK(cc.tag() == TimeTag::Tau);
    for (int k = 0; k <= 3; ++k) CHECK(cc.coeff(k).same_tree(s.coeff(k)));
}

TEST_CASE("conjugated quartic chart series equals the independent recomputation") {
    TauSeries z = lie_exp(quartic_field(), x + Expr::i() * y, 9);
    TauSeries zbar = conjugate_series(z);
    TauSeries direct = lie_exp(quartic_field(), x - Expr::i() * y, 9);
    CHECK(zbar.tag() == TimeTag::TauBar);
    for (int k = 0; k <= 9; ++k)
        CHECK(normalize(zbar.coeff(k) - direct.coeff(k)).is_zero_constant());
}

TEST_CASE("radius estimate") {
    Derivation f = hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), plane());
    TauSeries s = lie_exp(f, x + Expr::i() * y, 8);
    CHECK(std::isinf(estimate_radius(s, {{"x", 1.0}, {"y", 2.0}})));

    // entire series: the estimate from closed coefficients |xy|^k sqrt(2)/k! at
    // (1,1) grows without bound as the order increases
    Point p{{"x", 1.0}, {"y", 1.0}};
    auto closed_estimate = [&](int order) {
        double sup = 0.0;
        for (int k = order - (order + 1) / 2 + 1; k <= order; ++k)
            sup = std::max(sup, std::pow(std::sqrt(2.0) / factorial(k), 1.0 / k));
        return 1.0 / sup;
    };
    TauSeries q8 = lie_exp(quartic_field(), x + Expr::i() * y, 8);
    TauSeries q16 = lie_exp(quartic_field(), x + Expr::i() * y, 16);
    double r8 = estimate_radius(q8, p);
    double r16 = estimate_radius(q16, p);
    CHECK(r8 == doctest::Approx(closed_estimate(8)).epsilon(1e-12));
    CHECK(r16 == doctest::Approx(closed_estimate(16)).epsilon(1e-12));
    CHECK(r16 > r8);
    CHECK(r8 > 1.0);

    // synthetic geometric series c_k = rho^k f has radius 1/rho
    double rho = 2.5;
    std::vector<Expr> coeffs;
    RationalComplex rk(1);
    for (int k = 0; k <= 16; ++k) {
        coeffs.push_back(normalize(Expr::constant(rk) * (x + 2 * y)));
        rk = rk * RationalComplex(rho);
    }
    TauSeries geo(TimeTag::Tau, coeffs);
    double r = estimate_radius(geo, {{"x", 0.3}, {"y", 0.4}});
    CHECK(std::abs(r - 1.0 / rho) / (1.0 / rho) < 0.2);

    CHECK_THROWS_AS(estimate_radius(lie_exp(f, x, 3), p), Error);
}

TEST_CASE("series product basics") {
    Derivation f = quartic_field();
    TauSeries a = lie_exp(f, x + Expr::i() * y, 6);
    std::vector<Expr> one(7);
    one[0] = Expr::constant(1L);
    TauSeries unit(TimeTag::Tau, one);
    TauSeries prod = series_product(a, unit);
    for (int k = 0; k <= 6; ++k) CHECK(prod.coeff(k).same_tree(normalize(a.coeff(k))));

    TauSeries a0 = lie_exp(f, x + Expr::i() * y, 0);
    TauSeries b0 = lie_exp(f, x - Expr::i() * y, 0);
    TauSeries p0 = series_product(a0, b0);
    CHECK(p0.order() == 0);
    CHECK(equivalent(p0.coeff(0), pow(x, 2) + pow(y, 2)));

    CHECK_THROWS_AS(series_product(a, conjugate_series(a)), Error);
}

TEST_CASE("exponential acts as an algebra automorphism") {
    std::mt19937 rng(23);
    SymplecticForm w = plane();
    std::vector<Derivation> fields = {
        hamiltonian_field(Expr::rational(1, 2) * pow(y, 2), w),
        quartic_field(),
        hamiltonian_field(x * y, w),
    };
    for (int iter = 0; iter < 12; ++iter) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"}, 3, 3, true);
        Expr g = kftest::random_polynomial(rng, {"x", "y"}, 3, 3, true);
        const Derivation& field = fields[iter % fields.size()];
        TauSeries lhs = lie_exp(field, f * g, 8);
        TauSeries rhs = series_product(lie_exp(field, f, 8), lie_exp(field, g, 8));
        for (int k = 0; k <= 8; ++k)
            CHECK(normalize(lhs.coeff(k) - rhs.coeff(k)).is_zero_constant());
    }
}

TEST_CASE("flow action commutes with polynomial composition") {
    // F(x,y) evolved as one function agrees with F composed with the evolved
    // coordinate series, coefficient by coefficient on sample points
    std::mt19937 rng(29);
    Derivation field = quartic_field();
    int order = 6;
    TauSeries sx = lie_exp(field, x, order);
    TauSeries sy = lie_exp(field, y, order);
    for (int iter = 0; iter < 6; ++iter) {
        std::uniform_int_distribution<int> deg(0, 2), coeff(-3, 3);
        std::vector<Expr> zero(order + 1);
        TauSeries composed(TimeTag::Tau, zero);
        Expr direct_seed;
        for (int term = 0; term < 3; ++term) {
            int c = coeff(rng);
            if (c == 0) c = 2;
            int dx = deg(rng), dy = deg(rng);
            direct_seed = direct_seed + Expr::constant(static_cast<long>(c)) * pow(x, dx) * pow(y, dy);
            TauSeries mono = series_pow(sx, dx, order);
            mono = series_product(mono, series_pow(sy, dy, order));
            composed = series_add(composed, series_scale(mono, RationalComplex(static_cast<long>(c))));
        }
        TauSeries direct = lie_exp(field, direct_seed, order);
        for (int k = 0; k <= order; ++k) {
            for (double px : {-0.7, 0.4, 1.1}) {
                for (double py : {-0.5, 0.9}) {
                    Point p{{"x", px}, {"y", py}};
                    Complex a = evaluate(direct.coeff(k), p);
                    Complex b = evaluate(composed.coeff(k), p);
                    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
                }
            }
        }
    }
}

TEST_CASE("the Hamiltonian is conserved by its own flow") {
    Expr h = Expr::rational(1, 2) * pow(x * y, 2);
    TauSeries s = lie_exp(hamiltonian_field(h, plane()), h, 8);
    CHECK(normalize(s.coeff(0) - h).is_zero_constant());
    for (int k = 1; k <= 8; ++k) CHECK(normalize(s.coeff(k)).is_zero_constant());
}

TEST_CASE("poisson bracket against the flow convention") {
    SymplecticForm w = plane();
    // {f,g} = w(X_f, X_g); for w = dx^dy this is df/dx dg/dy - df/dy dg/dx
    Expr b = poisson_bracket(x, y, w);
    CHECK((equivalent(b, Expr::constant(1L)) || equivalent(b, Expr::constant(-1L))));
    CHECK(normalize(poisson_bracket(x, x, w)).is_zero_constant());
    // Jacobi identity on polynomials
    std::mt19937 rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        Expr f = kftest::random_polynomial(rng, {"x", "y"}, 3, 3);
        Expr g = kftest::random_polynomial(rng, {"x", "y"}, 3, 3);
        Expr h = kftest::random_polynomial(rng, {"x", "y"}, 3, 3);
        Expr jac = poisson_bracket(f, poisson_bracket(g, h, w), w) +
                   poisson_bracket(g, poisson_bracket(h, f, w), w) +
                   poisson_bracket(h, poisson_bracket(f, g, w), w);
        CHECK(normalize(jac).is_zero_constant());
    }
}
