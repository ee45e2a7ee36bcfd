#pragma once

// Text expressions for functions and forms on T^n.
//
//   expr    := sum (('∧' | '&') sum)*          wedge binds loosest
//   sum     := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' INTEGER)?
//   primary := INTEGER ('/' INTEGER)? ['i'] | 'i' | '(' expr ')'
//            | sin(expr) | cos(expr) | exp(expr) | tN | dtN
//
// t1…tn only live inside sin/cos (real integer linear forms) and exp
// (i times an integer linear form); anywhere else they are rejected, since a
// bare coordinate is not a function on the torus. Division is only allowed
// inside a rational literal.

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forms.hpp"

namespace twcoh {

namespace expr_detail {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, wedge, end };

struct Token {
    Tok kind;
    std::string text;
    int line, column;
    std::size_t begin, end; // byte offsets, used to detect "2i" juxtaposition
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        std::size_t b = i;
        auto single = [&](Tok t, std::size_t len) {
            std::string text(src.substr(i, len));
            advance(len);
            out.push_back({t, text, l, cl, b, i});
        };
        if (std::isdigit(c)) {
            std::size_t e = i;
            while (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) ++e;
            if (e < src.size() && src[e] == '.') throw ParseError("decimal literals are not exact; write p/q", l, cl);
            single(Tok::number, e - i);
        } else if (std::isalpha(c) || c == '_') {
            std::size_t e = i;
            while (e < src.size() && (std::isalnum(static_cast<unsigned char>(src[e])) || src[e] == '_')) ++e;
            single(Tok::ident, e - i);
        } else if (src.substr(i, 3) == "\xE2\x88\xA7") { // ∧
            single(Tok::wedge, 3);
        } else {
            switch (c) {
            case '+': single(Tok::plus, 1); break;
            case '-': single(Tok::minus, 1); break;
            case '*': single(Tok::star, 1); break;
            case '/': single(Tok::slash, 1); break;
            case '^': single(Tok::caret, 1); break;
            case '(': single(Tok::lparen, 1); break;
            case ')': single(Tok::rparen, 1); break;
            case '&': single(Tok::wedge, 1); break;
            default: throw ParseError("unexpected character '" + std::string(1, static_cast<char>(c)) + "'", l, cl);
            }
        }
    }
    out.push_back({Tok::end, "", line, col, i, i});
    return out;
}

/// c₀ + Σ c_j t_j; only meaningful as the argument of sin/cos/exp.
struct Linear {
    std::vector<Scalar> coeffs;
    Scalar constant;
    int line = 0, column = 0; // where a variable first appeared
};

using Value = std::variant<Scalar, Linear, TrigPoly, DifferentialForm>;

class Parser {
public:
    Parser(std::string_view src, std::size_t dim) : toks_(lex(src)), dim_(dim) {}

    Value parse() {
        Value v = wedge_expr();
        if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'", peek());
        if (auto* lin = std::get_if<Linear>(&v)) bare_variable(*lin);
        return v;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] static void fail(const std::string& msg, const Token& t) { throw ParseError(msg, t.line, t.column); }
    [[noreturn]] static void bare_variable(const Linear& lin) {
        throw ParseError("bare variable is not a ring element (t_j may only appear inside sin, cos or exp)", lin.line,
                         lin.column);
    }

    TrigPoly to_poly(const Value& v) const {
        if (auto* s = std::get_if<Scalar>(&v)) return TrigPoly::constant(dim_, *s);
        if (auto* p = std::get_if<TrigPoly>(&v)) return *p;
        if (auto* lin = std::get_if<Linear>(&v)) bare_variable(*lin);
        const auto& f = std::get<DifferentialForm>(v);
        if (f.degree() == 0) return f.component({});
        throw InvalidInput("expected a function, got a " + std::to_string(f.degree()) + "-form");
    }
    DifferentialForm to_form(const Value& v) const {
        if (auto* f = std::get_if<DifferentialForm>(&v)) return *f;
        return DifferentialForm::function(to_poly(v));
    }

    Value wedge_expr() {
        Value left = sum();
        while (peek().kind == Tok::wedge) {
            const Token& op = take();
            Value right = sum();
            if (auto* lin = std::get_if<Linear>(&left)) bare_variable(*lin);
            if (auto* lin = std::get_if<Linear>(&right)) bare_variable(*lin);
            DifferentialForm a = to_form(left), b = to_form(right);
            if (a.degree() + b.degree() > static_cast<int>(dim_))
                fail("wedge of degree " + std::to_string(a.degree() + b.degree()) + " exceeds the torus dimension", op);
            left = wedge(a, b);
        }
        return left;
    }

    Value sum() {
        Value left = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token& op = take();
            Value right = term();
            left = add(left, right, op.kind == Tok::minus ? Scalar(-1) : Scalar(1), op);
        }
        return left;
    }

    Value add(const Value& a, const Value& b, const Scalar& sign, const Token& op) {
        if (std::holds_alternative<Scalar>(a) && std::holds_alternative<Scalar>(b))
            return std::get<Scalar>(a) + sign * std::get<Scalar>(b);
        bool la = std::holds_alternative<Linear>(a), lb = std::holds_alternative<Linear>(b);
        if (la || lb) {
            if ((la || std::holds_alternative<Scalar>(a)) && (lb || std::holds_alternative<Scalar>(b))) {
                Linear out = la ? std::get<Linear>(a) : Linear{std::vector<Scalar>(dim_), std::get<Scalar>(a), 0, 0};
                if (lb) {
                    const auto& r = std::get<Linear>(b);
                    for (std::size_t j = 0; j < dim_; ++j) out.coeffs[j] += sign * r.coeffs[j];
                    out.constant += sign * r.constant;
                    if (!la) out.line = r.line, out.column = r.column;
                } else {
                    out.constant += sign * std::get<Scalar>(b);
                }
                return out;
            }
            bare_variable(la ? std::get<Linear>(a) : std::get<Linear>(b));
        }
        if (std::holds_alternative<DifferentialForm>(a) || std::holds_alternative<DifferentialForm>(b)) {
            DifferentialForm x = to_form(a), y = to_form(b);
            if (x.degree() != y.degree())
                fail("cannot add a " + std::to_string(x.degree()) + "-form and a " + std::to_string(y.degree()) + "-form", op);
            return x + sign * y;
        }
        TrigPoly out = to_poly(a);
        out += sign * to_poly(b);
        return out;
    }

    Value term() {
        Value left = unary();
        while (true) {
            if (peek().kind == Tok::slash) fail("division is only allowed between integer literals (write p/q)", peek());
            if (peek().kind != Tok::star) break;
            const Token& op = take();
            Value right = unary();
            left = multiply(left, right, op);
        }
        if (peek().kind == Tok::slash) fail("division is only allowed between integer literals (write p/q)", peek());
        return left;
    }

    Value scale(const Value& v, const Scalar& s) {
        if (auto* x = std::get_if<Scalar>(&v)) return s * *x;
        if (auto* lin = std::get_if<Linear>(&v)) {
            Linear out = *lin;
            for (auto& c : out.coeffs) c = s * c;
            out.constant = s * out.constant;
            return out;
        }
        if (auto* p = std::get_if<TrigPoly>(&v)) return s * *p;
        return s * std::get<DifferentialForm>(v);
    }

    Value multiply(const Value& a, const Value& b, const Token& op) {
        if (auto* s = std::get_if<Scalar>(&a)) return scale(b, *s);
        if (auto* s = std::get_if<Scalar>(&b)) return scale(a, *s);
        if (auto* lin = std::get_if<Linear>(&a)) bare_variable(*lin);
        if (auto* lin = std::get_if<Linear>(&b)) bare_variable(*lin);
        bool fa = std::holds_alternative<DifferentialForm>(a), fb = std::holds_alternative<DifferentialForm>(b);
        if (fa && fb) {
            const auto& x = std::get<DifferentialForm>(a);
            const auto& y = std::get<DifferentialForm>(b);
            if (x.degree() > 0 && y.degree() > 0) fail("'*' between two forms; use ∧ (or &) for the wedge product", op);
            return wedge(x, y);
        }
        if (fa) return to_poly(b) * std::get<DifferentialForm>(a);
        if (fb) return to_poly(a) * std::get<DifferentialForm>(b);
        return to_poly(a) * to_poly(b);
    }

    Value unary() {
        if (accept(Tok::plus)) return unary();
        if (accept(Tok::minus)) return scale(unary(), Scalar(-1));
        return power();
    }

    Value power() {
        Value base = primary();
        if (!accept(Tok::caret)) return base;
        const Token& e = peek();
        if (e.kind == Tok::minus) fail("exponents must be non-negative integers", e);
        if (e.kind != Tok::number) fail("exponent must be an integer literal", e);
        take();
        if (e.text.size() > 4) fail("exponent too large", e);
        unsigned k = static_cast<unsigned>(std::stoul(e.text));
        if (auto* s = std::get_if<Scalar>(&base)) return pow(*s, k);
        if (auto* lin = std::get_if<Linear>(&base)) bare_variable(*lin);
        if (auto* f = std::get_if<DifferentialForm>(&base); f && f->degree() > 0)
            fail("powers of forms are not defined; use ∧", e);
        return pow(to_poly(base), k);
    }

    Value primary() {
        const Token& t = take();
        switch (t.kind) {
        case Tok::number: {
            mpq_class q(mpz_class(t.text), 1);
            std::size_t end = t.end;
            if (peek().kind == Tok::slash) {
                take();
                const Token& d = take();
                if (d.kind != Tok::number) fail("division is only allowed between integer literals (write p/q)", d);
                mpz_class den(d.text);
                if (den == 0) fail("zero denominator", d);
                q = mpq_class(mpz_class(t.text), den);
                q.canonicalize();
                end = d.end;
            }
            if (peek().kind == Tok::ident && peek().text == "i" && peek().begin == end) {
                take();
                return Scalar(0, q);
            }
            return Scalar(q);
        }
        case Tok::lparen: {
            Value v = wedge_expr();
            if (!accept(Tok::rparen)) fail("expected ')'", peek());
            return v;
        }
        case Tok::ident: return identifier(t);
        case Tok::end: fail("unexpected end of expression", t);
        default: fail("unexpected '" + t.text + "'", t);
        }
    }

    /// Integer index of "t7" / "dt7" style names, 1-based.
    std::optional<int> axis_suffix(const std::string& name, std::size_t prefix) const {
        if (name.size() <= prefix) return std::nullopt;
        for (std::size_t k = prefix; k < name.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(name[k]))) return std::nullopt;
        if (name.size() - prefix > 6) return std::nullopt;
        return std::stoi(name.substr(prefix));
    }

    Value identifier(const Token& t) {
        const std::string& name = t.text;
        if (name == "i") return Scalar::i();
        if (name == "sin" || name == "cos" || name == "exp") return function(t);
        if (auto j = axis_suffix(name, 2); j && name.rfind("dt", 0) == 0) {
            if (*j < 1 || *j > static_cast<int>(dim_))
                fail("unknown form symbol " + name + " on T^" + std::to_string(dim_), t);
            return DifferentialForm::dt(dim_, *j - 1);
        }
        if (auto j = axis_suffix(name, 1); j && name[0] == 't') {
            if (*j < 1 || *j > static_cast<int>(dim_))
                fail("unknown variable " + name + " on T^" + std::to_string(dim_), t);
            Linear lin{std::vector<Scalar>(dim_), Scalar(), t.line, t.column};
            lin.coeffs[static_cast<std::size_t>(*j - 1)] = Scalar(1);
            return lin;
        }
        fail("unknown identifier '" + name + "'", t);
    }

    Value function(const Token& name) {
        if (!accept(Tok::lparen)) fail("expected '(' after " + name.text, peek());
        const Token& start = peek();
        Value arg = wedge_expr();
        if (!accept(Tok::rparen)) fail("expected ')'", peek());
        const auto* lin = std::get_if<Linear>(&arg);
        bool trig = name.text != "exp";
        std::string want = trig ? "an integer linear form in t1..tn" : "i times an integer linear form in t1..tn";
        if (!lin) fail(name.text + " needs " + want, start);
        if (!lin->constant.is_zero()) fail(name.text + " argument has a constant term; only " + want + " is allowed", start);
        FreqVector k(dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            const Scalar& c = lin->coeffs[j];
            mpq_class part = trig ? c.re() : c.im();
            mpq_class other = trig ? c.im() : c.re();
            if (sgn(other) != 0 || part.get_den() != 1) fail(name.text + " needs " + want, start);
            if (abs(part) > 1000) fail("frequency too large", start);
            k[j] = static_cast<int>(part.get_num().get_si());
        }
        if (name.text == "cos") return TrigPoly::cos_mode(k);
        if (name.text == "sin") return TrigPoly::sin_mode(k);
        return TrigPoly::monomial(k);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t dim_;
};

} // namespace expr_detail

/// Parses and lowers to a TrigPoly or a DifferentialForm on T^dim.
inline std::variant<TrigPoly, DifferentialForm> parse_expression(std::string_view src, std::size_t dim) {
    if (dim == 0) throw InvalidInput("torus dimension must be positive");
    expr_detail::Parser p(src, dim);
    auto v = p.parse();
    if (auto* s = std::get_if<Scalar>(&v)) return TrigPoly::constant(dim, *s);
    if (auto* f = std::get_if<TrigPoly>(&v)) return *f;
    return std::get<DifferentialForm>(v);
}

inline TrigPoly parse_function(std::string_view src, std::size_t dim) {
    auto v = parse_expression(src, dim);
    if (auto* f = std::get_if<TrigPoly>(&v)) return *f;
    const auto& form = std::get<DifferentialForm>(v);
    if (form.degree() == 0) return form.component({});
    throw DegreeMismatch("expected a function but '" + std::string(src) + "' is a " + std::to_string(form.degree()) + "-form");
}

/// `degree` < 0 accepts any degree.
inline DifferentialForm parse_form(std::string_view src, std::size_t dim, int degree = -1) {
    auto v = parse_expression(src, dim);
    DifferentialForm out = std::holds_alternative<TrigPoly>(v) ? DifferentialForm::function(std::get<TrigPoly>(v))
                                                               : std::get<DifferentialForm>(v);
    if (degree >= 0 && out.degree() != degree && !(out.is_zero() && degree <= static_cast<int>(dim)))
        throw DegreeMismatch("expected a " + std::to_string(degree) + "-form but '" + std::string(src) + "' is a " +
                           std::to_string(out.degree()) + "-form");
    if (out.is_zero() && degree >= 0) return DifferentialForm(dim, degree);
    return out;
}

// --- printing: output re-parses to the same value ---------------------------

inline std::string to_expression(const TrigPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        bool constant = true;
        for (int v : k.k) constant = constant && v == 0;
        if (constant) continue;
        os << "*exp(i*(";
        bool lead = true;
        for (std::size_t j = 0; j < k.dim(); ++j) {
            if (k[j] == 0) continue;
            if (lead)
                os << (k[j] < 0 ? "-" : "");
            else
                os << (k[j] < 0 ? "-" : "+");
            lead = false;
            os << std::abs(k[j]) << "*t" << j + 1;
        }
        os << "))";
    }
    return os.str();
}

inline std::string to_expression(const DifferentialForm& f) {
    auto frame = [](const MultiIndex& I) {
        std::string s;
        for (std::size_t j = 0; j < I.size(); ++j) s += (j ? "∧dt" : "dt") + std::to_string(I[j] + 1);
        return s;
    };
    if (f.degree() == 0) return to_expression(f.component({}));
    if (f.is_zero()) {
        MultiIndex I;
        for (int j = 0; j < f.degree(); ++j) I.push_back(j);
        return "0*" + frame(I);
    }
    std::string out;
    for (const auto& [I, c] : f.components()) {
        if (!out.empty()) out += " + ";
        out += "((" + to_expression(c) + ")*" + frame(I) + ")";
    }
    return out;
}

} // namespace twcoh
