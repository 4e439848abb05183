#pragma once

#include <random>
#include <vector>

#include "kahlerflow/expr.hpp"

namespace kftest {

using kahlerflow::Expr;

// small random polynomial with integer coefficients over the given symbols
inline Expr random_polynomial(std::mt19937& rng, const std::vector<std::string>& symbols,
                              int max_terms = 4, int max_degree = 3, bool complex_coeffs = false) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> degree(0, max_degree);
    std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
    Expr poly;
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        int c = coeff(rng);
        if (c == 0) c = 1;
        Expr mono = Expr::constant(static_cast<long>(c));
        if (complex_coeffs && coeff(rng) > 0) mono = mono * Expr::i();
        int deg = degree(rng);
        for (int d = 0; d < deg; ++d) mono = mono * Expr::symbol(symbols[pick(rng)]);
        poly = poly + mono;
    }
    return poly;
}

inline kahlerflow::Point random_point(std::mt19937& rng, const std::vector<std::string>& symbols,
                                      double lo = -1.5, double hi = 1.5) {
    std::uniform_real_distribution<double> dist(lo, hi);
    kahlerflow::Point p;
    for (const auto& s : symbols) p.set(s, dist(rng));
    return p;
}

}  // namespace kftest
