#include "subgroup.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "rational.hpp"

namespace gca {

RealSubgroup subgroup_closure(const std::vector<PotValue>& gens, double beta,
                              double omega_witness) {
    RealSubgroup g;
    std::vector<PotValue> nz;
    for (const PotValue& v : gens)
        if (!v.is_zero()) nz.push_back(v);
    if (nz.empty()) {
        g.kind = RealSubgroup::Kind::zero;
        return g;
    }

    const PotValue& base = nz.front();
    for (std::size_t i = 1; i < nz.size(); ++i) {
        if (!commensurable(base, nz[i])) {
            g.kind = RealSubgroup::Kind::dense;
            g.dense_witness = {base, nz[i]};
            return g;
        }
    }

    // All generators lie on the ray Q * base: fold the rational gcd of the
    // exact ratios g_i / base, then scale back. The sign of the numeric value
    // only orients the generator; the group itself is decided exactly.
    Rational acc = exact_ratio(nz[0], base);
    if (acc.num() < 0) acc = -acc;
    for (std::size_t i = 1; i < nz.size(); ++i) {
        Rational q = exact_ratio(nz[i], base);
        if (q.num() < 0) q = -q;
        acc = rational_gcd(acc, q);
    }
    PotValue step = acc * base;
    if (step.numeric(omega_witness) < 0.0) step = -step;

    g.kind = RealSubgroup::Kind::cyclic;
    g.step = step;
    g.numeric_step = std::abs(beta * step.numeric(omega_witness));
    return g;
}

FactorType factor_type(const RealSubgroup& group) {
    FactorType t;
    switch (group.kind) {
        case RealSubgroup::Kind::zero:
            throw precondition_error(
                "the invariant group is trivial: the modular flow is periodic with every "
                "period, which does not occur for the weights considered here");
        case RealSubgroup::Kind::dense:
            t.kind = FactorType::Kind::type_iii_one;
            t.lambda = 1.0;
            t.label = "III_1";
            return t;
        case RealSubgroup::Kind::cyclic: {
            t.kind = FactorType::Kind::type_iii_lambda;
            t.lambda = std::exp(-group.numeric_step);
            char buf[64];
            std::snprintf(buf, sizeof(buf), "III_%.15g", t.lambda);
            t.label = buf;
            return t;
        }
    }
    throw invalid_argument("factor_type: unknown subgroup kind");
}

}  // namespace gca
