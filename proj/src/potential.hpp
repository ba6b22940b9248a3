#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rational.hpp"

namespace gca {

// A potential value p/q + (r/s)*w where w is the single irrational symbol a
// graph may declare. Arithmetic is exact on the coordinate pair; the symbol
// only becomes a number through its declared decimal witness. Because w is
// irrational, a value is zero exactly when both coordinates are.
struct PotValue {
    Rational rat;
    Rational irr;

    PotValue() = default;
    PotValue(Rational r) : rat(r) {}
    PotValue(Rational r, Rational i) : rat(r), irr(i) {}
    static PotValue integer(std::int64_t n) { return PotValue(Rational(n)); }
    static PotValue omega(Rational coef) { return PotValue(Rational(0), coef); }

    bool is_zero() const { return rat.is_zero() && irr.is_zero(); }
    bool uses_omega() const { return !irr.is_zero(); }

    PotValue operator-() const { return {-rat, -irr}; }
    friend PotValue operator+(const PotValue& a, const PotValue& b) {
        return {a.rat + b.rat, a.irr + b.irr};
    }
    friend PotValue operator-(const PotValue& a, const PotValue& b) {
        return {a.rat - b.rat, a.irr - b.irr};
    }
    friend PotValue operator*(const Rational& c, const PotValue& v) {
        return {c * v.rat, c * v.irr};
    }
    PotValue& operator+=(const PotValue& o) { rat += o.rat; irr += o.irr; return *this; }
    PotValue& operator-=(const PotValue& o) { rat -= o.rat; irr -= o.irr; return *this; }

    friend bool operator==(const PotValue& a, const PotValue& b) {
        return a.rat == b.rat && a.irr == b.irr;
    }
    friend bool operator!=(const PotValue& a, const PotValue& b) { return !(a == b); }
    // Lexicographic; used for deterministic set ordering, not for magnitude.
    friend bool operator<(const PotValue& a, const PotValue& b) {
        if (a.rat != b.rat) return a.rat < b.rat;
        return a.irr < b.irr;
    }

    // rat + irr * omega_witness, evaluated the same way every time so that
    // identical inputs reproduce bit-identical doubles.
    double numeric(double omega_witness) const {
        return rat.to_double() + irr.to_double() * omega_witness;
    }

    // Literal in the graph-file grammar: "p/q" or "p/q+r/s<name>".
    std::string str(std::string_view omega_name = "w") const;
};

// True when a = (p/q) b over the rationals, decided exactly on the
// coordinate pairs: for nonzero a, b this is the vanishing of the 2x2
// determinant a.rat*b.irr - a.irr*b.rat together with no constraint beyond
// it. Zero is commensurable with everything.
bool commensurable(const PotValue& a, const PotValue& b);

// The exact ratio a/b for commensurable values with b nonzero.
Rational exact_ratio(const PotValue& a, const PotValue& b);

}  // namespace gca
