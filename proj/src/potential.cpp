#include "potential.hpp"

#include "errors.hpp"

namespace gca {

std::string PotValue::str(std::string_view omega_name) const {
    if (irr.is_zero()) return rat.str();
    std::string s = rat.str();
    s += '+';
    s += irr.str();
    s += omega_name;
    return s;
}

bool commensurable(const PotValue& a, const PotValue& b) {
    if (a.is_zero() || b.is_zero()) return true;
    return (a.rat * b.irr - a.irr * b.rat).is_zero();
}

Rational exact_ratio(const PotValue& a, const PotValue& b) {
    if (b.is_zero()) throw invalid_argument("ratio against zero potential value");
    if (!commensurable(a, b)) throw invalid_argument("ratio of incommensurable potential values");
    if (!b.rat.is_zero()) return a.rat / b.rat;
    return a.irr / b.irr;
}

}  // namespace gca
