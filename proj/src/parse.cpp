#include <cctype>
#include <string>

#include "kahlerflow/expr.hpp"

namespace kahlerflow {
namespace {

struct Lexer {
    explicit Lexer(const std::string& text) : text(text) {}

    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    void advance() {
        if (pos < text.size()) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line, col, msg); }
};

struct Parser {
    Lexer lex;

    explicit Parser(const std::string& text) : lex(text) {}

    Expr parse() {
        Expr e = sum();
        if (lex.peek() != '\0') lex.fail("unexpected trailing input");
        return e;
    }

    Expr sum() {
        Expr e = term();
        for (;;) {
            if (lex.eat('+'))
                e = e + term();
            else if (lex.eat('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (lex.eat('*'))
                e = e * factor();
            else if (lex.eat('/'))
                e = e * pow(factor(), -1);
            else
                return e;
        }
    }

    Expr factor() {
        if (lex.eat('-')) return Expr::constant(-1L) * factor();
        if (lex.eat('+')) return factor();
        Expr e = primary();
        if (lex.eat('^')) return pow(e, int_exponent());
        return e;
    }

    int int_exponent() {
        bool paren = lex.eat('(');
        bool neg = lex.eat('-');
        char c = lex.peek();
        if (!std::isdigit(static_cast<unsigned char>(c))) lex.fail("expected integer exponent");
        long v = 0;
        while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
            v = v * 10 + (lex.text[lex.pos] - '0');
            if (v > 1000000) lex.fail("exponent too large");
            lex.advance();
        }
        if (paren && !lex.eat(')')) lex.fail("expected ')' after exponent");
        return static_cast<int>(neg ? -v : v);
    }

    Expr primary() {
        char c = lex.peek();
        if (c == '(') {
            lex.advance();
            Expr e = sum();
            if (!lex.eat(')')) lex.fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        lex.fail(std::string("unexpected character '") + c + "'");
    }

    Expr number() {
        lex.skip_ws();
        boost::multiprecision::cpp_int mantissa = 0;
        long frac_digits = 0;
        bool any = false;
        while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
            mantissa = mantissa * 10 + (lex.text[lex.pos] - '0');
            any = true;
            lex.advance();
        }
        if (lex.pos < lex.text.size() && lex.text[lex.pos] == '.') {
            lex.advance();
            while (lex.pos < lex.text.size() &&
                   std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
                mantissa = mantissa * 10 + (lex.text[lex.pos] - '0');
                ++frac_digits;
                any = true;
                lex.advance();
            }
        }
        if (!any) lex.fail("malformed number");
        long exp10 = 0;
        if (lex.pos < lex.text.size() && (lex.text[lex.pos] == 'e' || lex.text[lex.pos] == 'E')) {
            lex.advance();
            bool neg = false;
            if (lex.pos < lex.text.size() && (lex.text[lex.pos] == '+' || lex.text[lex.pos] == '-')) {
                neg = lex.text[lex.pos] == '-';
                lex.advance();
            }
            if (lex.pos >= lex.text.size() || !std::isdigit(static_cast<unsigned char>(lex.text[lex.pos])))
                lex.fail("malformed exponent");
            long e = 0;
            while (lex.pos < lex.text.size() &&
                   std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
                e = e * 10 + (lex.text[lex.pos] - '0');
                if (e > 1000) lex.fail("exponent too large");
                lex.advance();
            }
            exp10 = neg ? -e : e;
        }
        Rational value(mantissa);
        long net = exp10 - frac_digits;
        Rational scale = 1;
        for (long k = 0; k < (net < 0 ? -net : net); ++k) scale *= 10;
        if (net < 0)
            value /= scale;
        else
            value *= scale;
        return Expr::constant(RationalComplex(std::move(value)));
    }

    Expr identifier() {
        lex.skip_ws();
        std::string name;
        while (lex.pos < lex.text.size() &&
               (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) || lex.text[lex.pos] == '_')) {
            name += lex.text[lex.pos];
            lex.advance();
        }
        if (name == "i") return Expr::i();
        if (lex.peek() == '(') {
            lex.advance();
            Expr arg = sum();
            if (!lex.eat(')')) lex.fail("expected ')' after function argument");
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            if (name == "exp") return exp(arg);
            if (name == "conj") return conj(arg);
            lex.fail("unknown function '" + name + "'");
        }
        return Expr::symbol(name);
    }
};

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

}  // namespace kahlerflow
