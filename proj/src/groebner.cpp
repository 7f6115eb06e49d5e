#include "neron/groebner.hpp"

#include <algorithm>
#include <set>

namespace neron {

namespace {

// Full reduction: every term of the result is irreducible modulo the leading
// monomials of `basis`. The divisor is picked by `pick` among all candidates.
Polynomial reduce_full(const Polynomial& p, const std::vector<Polynomial>& basis,
                       MonomialOrder order,
                       const std::function<std::size_t(const std::vector<std::size_t>&)>* pick) {
    Polynomial h = p.with_order(order);
    Polynomial r(p.table(), order);
    std::vector<std::size_t> candidates;
    while (!h.is_zero()) {
        const Term& lt = h.leading_term();
        candidates.clear();
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (mon_divides(basis[i].leading_term().mon, lt.mon)) candidates.push_back(i);
        if (candidates.empty()) {
            Polynomial mono = Polynomial::term(p.table(), lt.mon, lt.coeff, order);
            r += mono;
            h -= mono;
        } else {
            std::size_t pickd = pick ? (*pick)(candidates) : candidates.front();
            const Polynomial& g = basis[pickd];
            Monomial m = mon_div(lt.mon, g.leading_term().mon);
            Rat c = lt.coeff / g.leading_term().coeff;
            h -= g.mul_term(m, c);
        }
    }
    return r.with_order(p.order());
}

struct Pair {
    std::uint64_t deg;
    std::size_t i, j;
    bool operator<(const Pair& o) const {
        if (deg != o.deg) return deg < o.deg;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

} // namespace

GroebnerBasis buchberger(const Ideal& ideal, MonomialOrder order) {
    std::vector<Polynomial> basis;
    for (const auto& g : ideal.gens)
        if (!g.is_zero()) basis.push_back(g.with_order(order).primitive().monic());

    std::set<Pair> pairs;
    auto add_pairs = [&](std::size_t k) {
        for (std::size_t i = 0; i < k; ++i) {
            Monomial l = mon_lcm(basis[i].leading_term().mon, basis[k].leading_term().mon);
            pairs.insert({l.total_degree(), i, k});
        }
    };
    for (std::size_t k = 1; k < basis.size(); ++k) add_pairs(k);

    while (!pairs.empty()) {
        Pair pr = *pairs.begin();
        pairs.erase(pairs.begin());
        const Polynomial& gi = basis[pr.i];
        const Polynomial& gj = basis[pr.j];
        const Monomial& mi = gi.leading_term().mon;
        const Monomial& mj = gj.leading_term().mon;
        if (mon_coprime(mi, mj)) continue; // product criterion
        Monomial l = mon_lcm(mi, mj);
        Polynomial s = gi.mul_term(mon_div(l, mi), Rat(1) / gi.leading_term().coeff) -
                       gj.mul_term(mon_div(l, mj), Rat(1) / gj.leading_term().coeff);
        Polynomial red = reduce_full(s, basis, order, nullptr);
        if (!red.is_zero()) {
            basis.push_back(red.primitive().monic());
            add_pairs(basis.size() - 1);
        }
    }

    // minimalize: drop elements whose leading monomial another divides
    std::vector<Polynomial> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& mi = basis[i].leading_term().mon;
            const Monomial& mj = basis[j].leading_term().mon;
            if (mon_divides(mj, mi) && (!(mi == mj) || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }

    // tail-reduce each element against the others
    std::vector<Polynomial> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Polynomial> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        reduced.push_back(reduce_full(minimal[i], others, order, nullptr).monic());
    }

    std::sort(reduced.begin(), reduced.end(), [&](const Polynomial& a, const Polynomial& b) {
        return order.greater(a.leading_term().mon, b.leading_term().mon);
    });
    return {std::move(reduced), order, ideal.table};
}

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& G) {
    require_same_table(p.table(), G.table);
    return reduce_full(p, G.basis, G.order, nullptr);
}

Polynomial normal_form_choosing(
    const Polynomial& p, const GroebnerBasis& G,
    const std::function<std::size_t(const std::vector<std::size_t>&)>& pick) {
    require_same_table(p.table(), G.table);
    return reduce_full(p, G.basis, G.order, &pick);
}

bool ideal_member(const Polynomial& p, const Ideal& ideal) {
    if (p.is_zero()) return true;
    GroebnerBasis G = buchberger(ideal);
    return normal_form(p, G).is_zero();
}

namespace {

// Table extended with a fresh elimination tag in front.
struct TaggedRing {
    VarTablePtr table;
    std::size_t tag; // index of the tag variable
    std::vector<std::size_t> into; // original index -> tagged index
};

TaggedRing make_tagged(const VarTablePtr& vt) {
    std::string tag_name = "_t";
    while (vt->has(tag_name)) tag_name += "_";
    std::vector<std::string> names{tag_name};
    std::vector<VarRole> roles{VarRole::Tag};
    for (std::size_t i = 0; i < vt->size(); ++i) {
        names.push_back(vt->name(i));
        roles.push_back(vt->role(i));
    }
    TaggedRing r;
    r.table = make_table(std::move(names), std::move(roles));
    r.tag = 0;
    for (std::size_t i = 0; i < vt->size(); ++i) r.into.push_back(i + 1);
    return r;
}

} // namespace

Ideal ideal_intersect(const Ideal& I, const Ideal& J) {
    require_same_table(I.table, J.table);
    TaggedRing ring = make_tagged(I.table);
    MonomialOrder elim = MonomialOrder::block_elim(1);
    Polynomial t = Polynomial::variable(ring.table, ring.tag, 1, elim);
    Polynomial one_minus_t = Polynomial::constant(ring.table, 1, elim) - t;
    std::vector<Polynomial> gens;
    for (const auto& p : I.gens) gens.push_back(t * remap(p, ring.table, ring.into, elim));
    for (const auto& p : J.gens) gens.push_back(one_minus_t * remap(p, ring.table, ring.into, elim));
    GroebnerBasis G = buchberger(Ideal(ring.table, std::move(gens)), elim);
    std::vector<Polynomial> out;
    std::vector<std::size_t> back(ring.table->size(), VarTable::npos);
    for (std::size_t i = 0; i < I.table->size(); ++i) back[ring.into[i]] = i;
    for (const auto& g : G.basis) {
        if (g.degree_in(ring.tag) == 0) out.push_back(remap(g, I.table, back));
    }
    return Ideal(I.table, std::move(out));
}

Ideal ideal_quotient(const Ideal& I, const Ideal& J) {
    require_same_table(I.table, J.table);
    if (J.gens.empty()) fail(ErrorKind::Validation, "ideal quotient by the zero ideal");
    Ideal result;
    bool first = true;
    for (const auto& g : J.gens) {
        Ideal inter = ideal_intersect(I, Ideal(I.table, {g}));
        std::vector<Polynomial> colon_g;
        for (const auto& p : inter.gens) colon_g.push_back(exact_divide(p, g));
        Ideal cg(I.table, std::move(colon_g));
        if (first) {
            result = std::move(cg);
            first = false;
        } else {
            result = ideal_intersect(result, cg);
        }
    }
    // canonical generators: the reduced basis under the default order
    GroebnerBasis G = buchberger(result);
    return Ideal(I.table, G.basis);
}

} // namespace neron
