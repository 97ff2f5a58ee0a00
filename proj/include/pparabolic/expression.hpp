#pragma once

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <string>
#include <string_view>

#include "pparabolic/error.hpp"
#include "pparabolic/fields.hpp"

namespace pparabolic {

namespace detail {

// Recursive-descent parser:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)? ')' | '(' expr ')'
class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view src) : src_(src) {}

    ScalarField parse() {
        ScalarField f = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::InvalidDescriptor,
                    "expression: " + msg + " at offset " + std::to_string(pos_) + " in '" + std::string(src_) + "'");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    ScalarField expr() {
        ScalarField f = term();
        for (;;) {
            if (accept('+')) f = f + term();
            else if (accept('-')) f = f - term();
            else return f;
        }
    }

    ScalarField term() {
        ScalarField f = unary();
        for (;;) {
            if (accept('*')) f = f * unary();
            else if (accept('/')) f = f / unary();
            else return f;
        }
    }

    ScalarField unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    ScalarField power() {
        ScalarField base = primary();
        if (accept('^')) {
            ScalarField e = unary();
            if (!e.is_constant()) fail("exponent must be a constant");
            return pow(base, e.value(SpacetimePoint{}));
        }
        return base;
    }

    ScalarField primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (accept('(')) {
            ScalarField f = expr();
            expect(')');
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return named();
        fail(std::string("unexpected character '") + c + "'");
    }

    ScalarField number() {
        const std::string rest(src_.substr(pos_));
        char* end = nullptr;
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        return ScalarField::constant(v);
    }

    ScalarField named() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));

        if (accept('(')) {
            ScalarField a = expr();
            if (name == "min" || name == "max") {
                expect(',');
                ScalarField b = expr();
                expect(')');
                return name == "min" ? min(a, b) : max(a, b);
            }
            expect(')');
            if (name == "exp") return exp(a);
            if (name == "log") return log(a);
            if (name == "sqrt") return sqrt(a);
            if (name == "abs") return abs(a);
            if (name == "sin") return sin(a);
            if (name == "cos") return cos(a);
            fail("unknown function '" + name + "'");
        }

        if (name == "x" || name == "x0") return ScalarField::coord(0);
        if (name == "y" || name == "x1") return ScalarField::coord(1);
        if (name == "t") return ScalarField::time();
        if (name == "r2") return ScalarField::norm_sq();
        if (name == "pi") return ScalarField::constant(std::numbers::pi);
        if (name == "e") return ScalarField::constant(std::numbers::e);
        fail("unknown name '" + name + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses a closed-form expression in x (or x0), y (or x1), t and r2 = |x|^2.
inline ScalarField parse_expression(std::string_view src) { return detail::ExpressionParser(src).parse(); }

} // namespace pparabolic
