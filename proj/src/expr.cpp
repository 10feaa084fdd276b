#include "qsys/expr.hpp"

#include <algorithm>
#include <cctype>

namespace qsys {

namespace {

// Both evaluation domains share the recursive-descent skeleton; VALUE is
// either RationalFunction or GaussianRational.
template <typename Value, typename Ops>
class Parser {
public:
    Parser(const std::string &src, Ops ops) : src_(src), ops_(std::move(ops)) {}

    Value run() {
        Value v = expression();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, pos_ + 1); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Value expression() {
        Value acc = term();
        while (true) {
            if (eat('+')) acc = ops_.add(acc, term());
            else if (eat('-')) acc = ops_.sub(acc, term());
            else return acc;
        }
    }

    Value term() {
        Value acc = factor();
        while (true) {
            if (eat('*')) acc = ops_.mul(acc, factor());
            else if (eat('/')) {
                std::size_t at = pos_;
                Value d = factor();
                if (ops_.is_zero(d)) throw ParseError("division by zero", at);
                acc = ops_.div(acc, d);
            } else if (starts_atom(peek())) {
                // juxtaposition, e.g. "3i" or "2t"
                acc = ops_.mul(acc, factor());
            } else return acc;
        }
    }

    static bool starts_atom(char c) {
        return c == '(' || c == '_' || std::isalnum(static_cast<unsigned char>(c));
    }

    Value factor() {
        if (eat('-')) return ops_.neg(factor());
        if (eat('+')) return factor();
        Value base = atom();
        if (eat('^')) {
            long e = integer_exponent();
            if (e < 0) {
                if (ops_.is_zero(base)) fail("zero raised to a negative power");
                return ops_.pow(ops_.div(ops_.one(), base), -e);
            }
            return ops_.pow(base, e);
        }
        return base;
    }

    long integer_exponent() {
        bool negative = false;
        if (eat('-')) negative = true;
        if (eat('(')) {
            long e = integer_exponent();
            if (!eat(')')) fail("expected ')' after exponent");
            return negative ? -e : e;
        }
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent");
        long e = std::stol(src_.substr(start, pos_ - start));
        return negative ? -e : e;
    }

    Value atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expression();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return ops_.integer(Int(src_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            pos_ = start; // report errors at the identifier
            Value v = ops_.identifier(name, start + 1);
            pos_ = start + name.size();
            return v;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string &src_;
    Ops ops_;
    std::size_t pos_ = 0;
};

struct RfOps {
    const std::vector<std::string> &vars;
    RationalFunction add(const RationalFunction &a, const RationalFunction &b) const { return a + b; }
    RationalFunction sub(const RationalFunction &a, const RationalFunction &b) const { return a - b; }
    RationalFunction mul(const RationalFunction &a, const RationalFunction &b) const { return a * b; }
    RationalFunction div(const RationalFunction &a, const RationalFunction &b) const { return a / b; }
    RationalFunction neg(const RationalFunction &a) const { return -a; }
    RationalFunction one() const { return RationalFunction(Rational(1)); }
    bool is_zero(const RationalFunction &a) const { return a.is_zero(); }
    RationalFunction integer(const Int &n) const { return RationalFunction(Rational(n)); }
    RationalFunction pow(const RationalFunction &a, long e) const {
        RationalFunction acc = one(), base = a;
        for (long k = 0; k < e; ++k) acc = acc * base;
        return acc;
    }
    RationalFunction identifier(const std::string &name, std::size_t column) const {
        if (name == "i") throw ParseError("imaginary unit not allowed in a rational-function expression", column);
        if (std::find(vars.begin(), vars.end(), name) == vars.end())
            throw ParseError("unknown variable '" + name + "'", column);
        return RationalFunction::variable(name);
    }
};

struct GaussOps {
    GaussianRational add(const GaussianRational &a, const GaussianRational &b) const { return a + b; }
    GaussianRational sub(const GaussianRational &a, const GaussianRational &b) const { return a - b; }
    GaussianRational mul(const GaussianRational &a, const GaussianRational &b) const { return a * b; }
    GaussianRational div(const GaussianRational &a, const GaussianRational &b) const { return a / b; }
    GaussianRational neg(const GaussianRational &a) const { return -a; }
    GaussianRational one() const { return GaussianRational(Rational(1)); }
    bool is_zero(const GaussianRational &a) const { return a.is_zero(); }
    GaussianRational integer(const Int &n) const { return GaussianRational(Rational(n)); }
    GaussianRational pow(const GaussianRational &a, long e) const {
        GaussianRational acc = one(), base = a;
        for (long k = 0; k < e; ++k) acc = acc * base;
        return acc;
    }
    GaussianRational identifier(const std::string &name, std::size_t column) const {
        if (name == "i") return GaussianRational(Rational(0), Rational(1));
        throw ParseError("unknown symbol '" + name + "' in a constant expression", column);
    }
};

} // namespace

RationalFunction parse_rational_function(const std::string &expr, const std::vector<std::string> &vars) {
    return Parser<RationalFunction, RfOps>(expr, RfOps{vars}).run();
}

GaussianRational parse_gaussian(const std::string &expr) {
    return Parser<GaussianRational, GaussOps>(expr, GaussOps{}).run();
}

Rational parse_rational_const(const std::string &expr) {
    GaussianRational g = parse_gaussian(expr);
    if (!g.is_real()) throw std::invalid_argument("expected a real rational constant: " + expr);
    return g.re;
}

GaussianRational GaussianRational::parse(const std::string &s) { return parse_gaussian(s); }

} // namespace qsys
