#pragma once

#include <functional>
#include <vector>

#include "neron/polynomial.hpp"

namespace neron {

// Finitely generated ideal; zero generators are dropped on construction.
struct Ideal {
    std::vector<Polynomial> gens;
    VarTablePtr table;

    Ideal() = default;
    Ideal(VarTablePtr t, std::vector<Polynomial> g) : table(std::move(t)) {
        for (auto& p : g) {
            require_same_table(table, p.table());
            if (!p.is_zero()) gens.push_back(std::move(p));
        }
    }
};

// Reduced basis: monic, no leading monomial divisible by another's, every
// element tail-reduced against the rest.
struct GroebnerBasis {
    std::vector<Polynomial> basis;
    MonomialOrder order;
    VarTablePtr table;
};

// Buchberger with the normal pair-selection strategy (lcm total degree,
// ties by generator index); returns the reduced basis. Deterministic.
GroebnerBasis buchberger(const Ideal& ideal, MonomialOrder order = MonomialOrder::degrevlex());

// Unique remainder of p modulo G; zero iff p lies in the ideal.
Polynomial normal_form(const Polynomial& p, const GroebnerBasis& G);

// normal_form with the divisor at each step chosen by `pick(candidates)`;
// used by the confluence oracle in tests. The result must not depend on the
// choices for a reduced basis.
Polynomial normal_form_choosing(
    const Polynomial& p, const GroebnerBasis& G,
    const std::function<std::size_t(const std::vector<std::size_t>&)>& pick);

bool ideal_member(const Polynomial& p, const Ideal& ideal);

// I cap J via a tag variable: eliminate t from t*I + (1-t)*J.
Ideal ideal_intersect(const Ideal& I, const Ideal& J);

// (I : J) = intersection over generators g of J of (1/g)(I cap (g)).
Ideal ideal_quotient(const Ideal& I, const Ideal& J);

} // namespace neron
