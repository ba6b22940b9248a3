#pragma once

#include <optional>
#include <string>
#include <vector>

#include "potential.hpp"

namespace gca {

// Closure of the subgroup of (R, +) generated by finitely many values of the
// form q + q' omega. The verdict is decided by exact arithmetic only; the
// numeric fields are derived afterwards for reporting.
struct RealSubgroup {
    enum class Kind { zero, cyclic, dense } kind = Kind::zero;

    // kind == cyclic: positive generator, exact and numeric (scaled by beta).
    std::optional<PotValue> step;
    double numeric_step = 0.0;

    // kind == dense: a witness pair of incommensurable generators.
    std::optional<std::pair<PotValue, PotValue>> dense_witness;
};

// Closure of beta * <gens>. Zero generators are dropped; an empty remainder
// gives the zero group; any incommensurable pair gives the dense verdict;
// otherwise the group is cyclic and the step is the gcd over the common ray.
RealSubgroup subgroup_closure(const std::vector<PotValue>& gens, double beta,
                              double omega_witness);

struct FactorType {
    enum class Kind { type_iii_one, type_iii_lambda } kind = Kind::type_iii_one;
    double lambda = 0.0;  // e^{-step} for type III_lambda, in (0, 1)
    std::string label;    // "III_1" or "III_lambda" with the value rendered
};

// Translates a subgroup verdict into the factor type. The zero group is
// rejected: the flow would be trivial, which the classification excludes.
FactorType factor_type(const RealSubgroup& group);

}  // namespace gca
