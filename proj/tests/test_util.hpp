#pragma once

#include <random>
#include <vector>

#include "neron/expr.hpp"
#include "neron/polynomial.hpp"

namespace nt {

using namespace neron;

inline VarTablePtr xy_table(const std::vector<std::string>& unknowns) {
    std::vector<std::string> names{"x"};
    std::vector<VarRole> roles{VarRole::Parameter};
    for (const auto& u : unknowns) {
        names.push_back(u);
        roles.push_back(VarRole::Unknown);
    }
    return make_table(names, roles);
}

inline Polynomial P(const std::string& text, const VarTablePtr& vt) {
    return parse_polynomial(text, vt);
}

inline Polynomial random_poly(const VarTablePtr& vt, std::mt19937& rng, int maxterms = 4,
                              int maxdeg = 3, bool allow_zero = true) {
    std::uniform_int_distribution<int> nterms(allow_zero ? 0 : 1, maxterms);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::vector<Term> ts;
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        Monomial m(vt->size());
        for (std::size_t v = 0; v < vt->size(); ++v) m.exps[v] = deg(rng);
        int c = coef(rng);
        if (c == 0) c = 1;
        ts.push_back({std::move(m), Rat(c)});
    }
    return Polynomial::from_terms(vt, std::move(ts));
}

} // namespace nt
