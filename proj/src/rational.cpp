#include "rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "errors.hpp"

namespace gca {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational Rational::make_reduced(__int128 num, __int128 den) {
    if (den == 0) throw invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    *this = make_reduced(num, den);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::make_reduced(
        static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::make_reduced(
        static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::make_reduced(static_cast<__int128>(a.num_) * b.num_,
                                  static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw invalid_argument("rational division by zero");
    return Rational::make_reduced(static_cast<__int128>(a.num_) * b.den_,
                                  static_cast<__int128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

std::string Rational::str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
        s += '/';
        s += std::to_string(den_);
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw parse_error(0, "empty rational literal");
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '-') {
        neg = true;
        ++pos;
    }
    auto read_int = [&](const char* what) -> std::int64_t {
        std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start)
            throw parse_error(0, std::string("expected ") + what + " in rational literal '" +
                                     std::string(text) + "'");
        std::int64_t value = 0;
        for (std::size_t i = start; i < pos; ++i) {
            if (value > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
                throw parse_error(0, "integer literal out of range");
            value = value * 10 + (text[i] - '0');
        }
        return value;
    };
    std::int64_t num = read_int("numerator");
    std::int64_t den = 1;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = read_int("denominator");
        if (den == 0) throw parse_error(0, "zero denominator in rational literal");
    }
    if (pos != text.size())
        throw parse_error(0, "trailing characters in rational literal '" + std::string(text) + "'");
    return Rational(neg ? -num : num, den);
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a.is_zero() && b.is_zero()) return Rational(0);
    if (a.is_zero()) return b.sign() < 0 ? -b : b;
    if (b.is_zero()) return a.sign() < 0 ? -a : a;
    // aZ + bZ = (1/(da*db)) (na*db Z + nb*da Z)
    __int128 x = static_cast<__int128>(a.num()) * b.den();
    __int128 y = static_cast<__int128>(b.num()) * a.den();
    __int128 g = gcd128(x, y);
    return Rational(narrow(g), a.den()) / Rational(b.den());
}

}  // namespace gca
