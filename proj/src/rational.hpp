#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace gca {

// Exact rational with 64-bit numerator/denominator, always stored reduced
// with den > 0. Intermediate products run through __int128 and overflow of
// the stored representation throws; at the scales this library works at
// (file potentials, cycle weights, gcd chains) that never fires in practice
// but keeps the arithmetic honest.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t num, std::int64_t den);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
    Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);  // throws on b == 0

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // "p" or "p/q", reduced, q > 0.
    std::string str() const;

    // Parses "p" or "p/q" with optional leading '-'; q > 0 required.
    // Throws gca::parse_error(0, ...) on malformed input.
    static Rational parse(std::string_view text);

private:
    static Rational make_reduced(__int128 num, __int128 den);

    std::int64_t num_;
    std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Positive generator of the subgroup of Q generated by a and b: the value g
// with gZ = aZ + bZ. gcd(0, 0) == 0.
Rational rational_gcd(const Rational& a, const Rational& b);

}  // namespace gca
