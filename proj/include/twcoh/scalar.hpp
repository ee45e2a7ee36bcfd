#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace twcoh {

/// Reduced "p/q" rendering; integers keep the "/1" so every value has the same shape.
inline std::string rational_to_string(const mpq_class& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "p", "p/q", "-p/q" with optional leading '+'; result is canonical.
inline mpq_class rational_from_string(std::string_view s) {
    std::string text(s);
    if (!text.empty() && text.front() == '+') text.erase(text.begin());
    if (text.empty()) throw InvalidInput("empty rational literal");
    auto slash = text.find('/');
    auto digits_ok = [](std::string_view d, bool allow_sign) {
        if (allow_sign && !d.empty() && d.front() == '-') d.remove_prefix(1);
        if (d.empty()) return false;
        for (char c : d)
            if (c < '0' || c > '9') return false;
        return true;
    };
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw InvalidInput("malformed rational literal '" + text + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw InvalidInput("zero denominator in '" + text + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
}

/// Exact Gaussian rational re + i·im.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : re_(v) {} // NOLINT(google-explicit-constructor)
    Scalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }
    static Scalar i() { return Scalar(0, 1); }
    static Scalar ratio(long p, long q) { return Scalar(mpq_class(p, q)); }

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    Scalar conj() const { return Scalar(re_, -im_); }
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    Scalar inverse() const {
        if (is_zero()) throw NonInvertible("division by the zero scalar");
        mpq_class n = norm();
        return Scalar(re_ / n, -im_ / n);
    }

    Scalar& operator+=(const Scalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        if (o.is_real()) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

    /// this += a·b without allocating a temporary Scalar.
    void add_product(const Scalar& a, const Scalar& b) {
        thread_local mpq_class t;
        mpq_mul(t.get_mpq_t(), a.re_.get_mpq_t(), b.re_.get_mpq_t());
        mpq_add(re_.get_mpq_t(), re_.get_mpq_t(), t.get_mpq_t());
        if (sgn(a.im_) == 0 && sgn(b.im_) == 0) return;
        if (sgn(a.im_) != 0 && sgn(b.im_) != 0) {
            mpq_mul(t.get_mpq_t(), a.im_.get_mpq_t(), b.im_.get_mpq_t());
            mpq_sub(re_.get_mpq_t(), re_.get_mpq_t(), t.get_mpq_t());
        }
        if (sgn(b.im_) != 0) {
            mpq_mul(t.get_mpq_t(), a.re_.get_mpq_t(), b.im_.get_mpq_t());
            mpq_add(im_.get_mpq_t(), im_.get_mpq_t(), t.get_mpq_t());
        }
        if (sgn(a.im_) != 0) {
            mpq_mul(t.get_mpq_t(), a.im_.get_mpq_t(), b.re_.get_mpq_t());
            mpq_add(im_.get_mpq_t(), im_.get_mpq_t(), t.get_mpq_t());
        }
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    Scalar operator-() const { return Scalar(-re_, -im_); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    // Lexicographic on (re, im); only used to give containers a total order.
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
        int c = cmp(a.re_, b.re_);
        if (c == 0) c = cmp(a.im_, b.im_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// "p/q" when real, otherwise "p/q+p/qi" / "p/q-p/qi".
    std::string to_string() const {
        std::string out = rational_to_string(re_);
        if (sgn(im_) != 0) {
            out += sgn(im_) > 0 ? "+" : "-";
            out += rational_to_string(abs(im_)) + "i";
        }
        return out;
    }

    /// Inverse of to_string(); also accepts a bare real "p/q".
    static Scalar from_string(std::string_view s) {
        if (s.empty() || s.back() != 'i') return Scalar(rational_from_string(s));
        std::string_view body = s.substr(0, s.size() - 1);
        // Split at the last sign that is not the leading one.
        std::size_t split = std::string_view::npos;
        for (std::size_t k = body.size(); k-- > 1;)
            if (body[k] == '+' || body[k] == '-') {
                split = k;
                break;
            }
        if (split == std::string_view::npos) return Scalar(0, rational_from_string(body));
        mpq_class re = rational_from_string(body.substr(0, split));
        mpq_class im = rational_from_string(body.substr(split + 1));
        if (body[split] == '-') im = -im;
        return Scalar(re, im);
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

inline Scalar pow(Scalar base, unsigned exp) {
    Scalar out(1);
    while (exp) {
        if (exp & 1U) out *= base;
        base *= base;
        exp >>= 1U;
    }
    return out;
}

} // namespace twcoh
