#include "neron/special.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "neron/expr.hpp"

namespace neron {

ArtinianBase artinian_basis(const VarTablePtr& t_table, const std::vector<Polynomial>& relations) {
    ArtinianBase out;
    out.t_table = t_table;
    out.relations = relations;
    for (const auto& g : relations) require_same_table(t_table, g.table());
    out.gb = buchberger(Ideal(t_table, relations));

    std::size_t m = t_table->size();
    // finiteness: every variable must have a pure power among the leading
    // monomials, which also caps the standard-monomial box
    std::vector<std::size_t> cap(m, 0);
    for (const auto& g : out.gb.basis) {
        const Monomial& lm = g.leading_term().mon;
        std::size_t nz = 0, var = 0;
        for (std::size_t v = 0; v < m; ++v)
            if (lm.exps[v]) {
                ++nz;
                var = v;
            }
        if (nz == 0) fail(ErrorKind::Validation, "base relations generate the unit ideal");
        if (nz == 1 && (cap[var] == 0 || lm.exps[var] < cap[var])) cap[var] = lm.exps[var];
    }
    for (std::size_t v = 0; v < m; ++v)
        if (cap[v] == 0)
            fail(ErrorKind::NotArtinian,
                 "quotient is not Artinian: no power of " + t_table->name(v) + " lies in the ideal");

    // standard monomials inside the cap box
    std::vector<Monomial> std_mons;
    Monomial cur(m);
    while (true) {
        bool reducible = false;
        for (const auto& g : out.gb.basis)
            if (mon_divides(g.leading_term().mon, cur)) {
                reducible = true;
                break;
            }
        if (!reducible) std_mons.push_back(cur);
        // odometer over the box
        std::size_t v = 0;
        while (v < m) {
            if (cur.exps[v] + 1 < cap[v]) {
                ++cur.exps[v];
                break;
            }
            cur.exps[v] = 0;
            ++v;
        }
        if (v == m) break;
    }
    MonomialOrder ord = MonomialOrder::degrevlex();
    std::sort(std_mons.begin(), std_mons.end(),
              [&](const Monomial& a, const Monomial& b) { return ord.less(a, b); });
    out.basis = std::move(std_mons);
    if (out.basis.empty() || !out.basis.front().is_one())
        fail(ErrorKind::Validation, "base relations generate the unit ideal");

    // least s with T_v^s in (a) for every v
    std::size_t s = 1;
    for (std::size_t v = 0; v < m; ++v) {
        std::size_t k = 1;
        while (true) {
            Polynomial power = Polynomial::variable(t_table, v, static_cast<std::uint32_t>(k));
            if (normal_form(power, out.gb).is_zero()) break;
            ++k;
            if (k > cap[v] + 1) fail(ErrorKind::Internal, "nil index exceeded its cap");
        }
        s = std::max(s, k);
    }
    out.nil_index = s;
    return out;
}

std::string coeff_var_name(const std::string& unknown, const Monomial& alpha,
                           const VarTable& t_table) {
    if (alpha.is_one()) return unknown;
    std::ostringstream os;
    os << unknown << "_";
    for (std::size_t v = 0; v < t_table.size(); ++v) {
        std::uint32_t e = alpha.exps[v];
        if (!e) continue;
        os << t_table.name(v);
        if (e > 1) os << e;
    }
    return os.str();
}

void SpecialProblem::validate() const {
    if (precision == 0) fail(ErrorKind::Validation, "precision must be positive");
    if (unknowns.empty()) fail(ErrorKind::Validation, "no unknowns");
    if (ideal_gens.empty()) fail(ErrorKind::Validation, "empty ideal");
    for (const auto& g : ideal_gens) {
        require_same_table(ring, g.table());
        if (g.is_zero()) fail(ErrorKind::Validation, "zero ideal generator");
    }
    for (std::size_t i = 0; i < unknowns.size(); ++i)
        for (std::size_t b = 0; b < base.basis.size(); ++b)
            if (!table.count({i, b}))
                fail(ErrorKind::Validation, "coefficient table misses an (unknown, basis) entry");
    for (const auto& [k, s] : table)
        if (s.precision() != precision)
            fail(ErrorKind::Validation, "coefficient series precision mismatch");
}

namespace {

// [T..., coefficient vars...] with x absent (the generators carry no x).
struct CoeffRing {
    VarTablePtr with_t;    // T vars + Z vars
    VarTablePtr coeff;     // [x, Z vars]
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::size_t>> keys;
};

CoeffRing make_coeff_ring(const SpecialProblem& p) {
    CoeffRing r;
    std::size_t m = p.base.t_table->size();
    for (std::size_t i = 0; i < p.unknowns.size(); ++i)
        for (std::size_t b = 0; b < p.base.basis.size(); ++b) {
            r.names.push_back(
                coeff_var_name(p.ring->name(p.unknowns[i]), p.base.basis[b], *p.base.t_table));
            r.keys.push_back({i, b});
        }
    {
        std::set<std::string> seen;
        for (const auto& nfull : r.names)
            if (!seen.insert(nfull).second)
                fail(ErrorKind::Validation, "coefficient variable name collision: " + nfull);
    }
    std::vector<std::string> names1;
    std::vector<VarRole> roles1;
    for (std::size_t v = 0; v < m; ++v) {
        names1.push_back(p.base.t_table->name(v));
        roles1.push_back(VarRole::Nilpotent);
    }
    for (const auto& nm : r.names) {
        names1.push_back(nm);
        roles1.push_back(VarRole::Unknown);
    }
    r.with_t = make_table(names1, roles1);

    std::vector<std::string> names2{"x"};
    std::vector<VarRole> roles2{VarRole::Parameter};
    for (const auto& nm : r.names) {
        names2.push_back(nm);
        roles2.push_back(VarRole::Unknown);
    }
    r.coeff = make_table(names2, roles2);
    return r;
}

} // namespace

std::vector<Polynomial> expand_relations(const SpecialProblem& p, const VarTablePtr& coeff_table,
                                         const std::vector<std::string>& coeff_names) {
    p.validate();
    CoeffRing ring = make_coeff_ring(p);
    std::size_t m = p.base.t_table->size();

    // GB of the base relations lifted to [T, Z]
    std::vector<std::size_t> t_lift(m);
    for (std::size_t v = 0; v < m; ++v) t_lift[v] = v;
    std::vector<Polynomial> a_lift;
    for (const auto& g : p.base.gb.basis) a_lift.push_back(remap(g, ring.with_t, t_lift));
    GroebnerBasis gb_lift{a_lift, p.base.gb.order, ring.with_t};

    // the substitution Y_i -> sum Z_{i,alpha} T^alpha
    std::map<std::size_t, Polynomial> images;
    for (std::size_t i = 0; i < p.unknowns.size(); ++i) {
        Polynomial img(ring.with_t);
        for (std::size_t b = 0; b < p.base.basis.size(); ++b) {
            Monomial mon(ring.with_t->size());
            for (std::size_t v = 0; v < m; ++v) mon.exps[v] = p.base.basis[b].exps[v];
            std::size_t zi = m + i * p.base.basis.size() + b;
            mon.exps[zi] = 1;
            img += Polynomial::term(ring.with_t, mon, Rat(1));
        }
        images.emplace(p.unknowns[i], std::move(img));
    }

    // generators carried into [T, Z]: T vars map straight across, unknowns via images
    std::vector<Polynomial> collected;
    for (const auto& g : p.ideal_gens) {
        Polynomial acc(ring.with_t);
        for (const auto& t : g.terms()) {
            Polynomial factor = Polynomial::constant(ring.with_t, t.coeff);
            Monomial tpart(ring.with_t->size());
            for (std::size_t v = 0; v < p.ring->size(); ++v) {
                std::uint32_t e = t.mon.exps[v];
                if (!e) continue;
                if (v < m) {
                    tpart.exps[v] = e; // same T position in both tables
                } else {
                    auto it = images.find(v);
                    if (it == images.end())
                        fail(ErrorKind::Internal, "expand: unknown without image");
                    factor = factor * it->second.pow(e);
                }
            }
            acc += factor.mul_term(tpart, Rat(1));
        }
        Polynomial reduced = normal_form(acc, gb_lift);

        // collect the coefficient of each basis monomial
        std::map<std::size_t, std::vector<Term>> per_basis; // basis index -> Z-terms
        for (const auto& t : reduced.terms()) {
            Monomial tmon(m);
            for (std::size_t v = 0; v < m; ++v) tmon.exps[v] = t.mon.exps[v];
            std::size_t bix = p.base.basis.size();
            for (std::size_t b = 0; b < p.base.basis.size(); ++b)
                if (p.base.basis[b] == tmon) {
                    bix = b;
                    break;
                }
            if (bix == p.base.basis.size())
                fail(ErrorKind::Internal, "expand: non-standard T-monomial survived reduction");
            Monomial zmon(coeff_table->size());
            for (std::size_t zi = 0; zi < ring.names.size(); ++zi) {
                std::uint32_t e = t.mon.exps[m + zi];
                if (!e) continue;
                zmon.exps[coeff_table->index(ring.names[zi])] = e;
            }
            per_basis[bix].push_back({std::move(zmon), t.coeff});
        }
        for (auto& [bix, terms] : per_basis) {
            Polynomial c = Polynomial::from_terms(coeff_table, std::move(terms));
            if (c.is_zero()) continue;
            // strip x-content (trivial here: the generators carry no x)
            XOrder xc = x_content_order(c);
            if (!xc.infinite && xc.value > 0) {
                Polynomial xpow = Polynomial::variable(coeff_table, coeff_table->parameter_index(),
                                                       static_cast<std::uint32_t>(xc.value));
                c = exact_divide(c, xpow);
            }
            collected.push_back(std::move(c));
        }
    }

    // soundness: every collected relation vanishes on the table mod x^N
    std::map<std::size_t, TruncatedSeries> assign;
    for (std::size_t zi = 0; zi < ring.names.size(); ++zi) {
        auto key = ring.keys[zi];
        assign.emplace(coeff_table->index(ring.names[zi]), p.table.at(key));
    }
    for (const auto& c : collected) {
        // evaluate mod x^N
        TruncatedSeries val(p.precision);
        std::size_t xi = coeff_table->parameter_index();
        std::map<std::size_t, std::vector<TruncatedSeries>> powers;
        auto power_of = [&](std::size_t v, std::uint32_t e) -> const TruncatedSeries& {
            auto& vec = powers[v];
            if (vec.empty()) {
                TruncatedSeries one(p.precision);
                one.at(0) = 1;
                vec.push_back(one);
            }
            while (vec.size() <= e) vec.push_back(series_mul(vec.back(), assign.at(v)));
            return vec[e];
        };
        for (const auto& t : c.terms()) {
            TruncatedSeries term(p.precision);
            term.at(0) = t.coeff;
            bool dead = false;
            for (std::size_t v = 0; v < coeff_table->size() && !dead; ++v) {
                std::uint32_t e = t.mon.exps[v];
                if (!e) continue;
                if (v == xi) {
                    if (e >= p.precision) dead = true;
                    else term = series_shift(term, e);
                } else {
                    term = series_mul(term, power_of(v, e));
                }
            }
            if (!dead) val = series_add(val, term);
        }
        if (!val.is_zero())
            fail(ErrorKind::RelationViolated,
                 "derived relation does not vanish on the series table mod x^N: " + c.str());
    }
    (void)coeff_names;
    return collected;
}

Flattened flatten(const SpecialProblem& p) {
    p.validate();
    CoeffRing ring = make_coeff_ring(p);

    Flattened out;
    out.coeff_names = ring.names;
    out.coeff_keys = ring.keys;
    for (std::size_t zi = 0; zi < ring.names.size(); ++zi)
        out.series.push_back(p.table.at(ring.keys[zi]));

    std::vector<Polynomial> J;
    if (p.presentation_J) {
        for (const auto& text : *p.presentation_J)
            J.push_back(parse_polynomial(text, ring.coeff));
        out.used_fallback = false;
    } else {
        J = expand_relations(p, ring.coeff, ring.names);
        out.used_fallback = true;
    }
    if (J.empty()) fail(ErrorKind::Validation, "flatten: empty presentation");

    // unknowns of the flattened problem: the constant-part coefficient vars
    // plus every coefficient var occurring in the presentation
    std::vector<bool> used(ring.names.size(), false);
    for (std::size_t zi = 0; zi < ring.names.size(); ++zi)
        if (p.base.basis[ring.keys[zi].second].is_one()) used[zi] = true;
    for (const auto& g : J)
        for (const auto& t : g.terms())
            for (std::size_t zi = 0; zi < ring.names.size(); ++zi)
                if (t.mon.exps[ring.coeff->index(ring.names[zi])] > 0) used[zi] = true;
    for (std::size_t zi = 0; zi < ring.names.size(); ++zi)
        (used[zi] ? out.chosen : out.leftover).push_back(zi);

    // problem table [x, chosen...]
    std::vector<std::string> names{"x"};
    std::vector<VarRole> roles{VarRole::Parameter};
    for (auto zi : out.chosen) {
        names.push_back(ring.names[zi]);
        roles.push_back(VarRole::Unknown);
    }
    VarTablePtr ptable = make_table(std::move(names), std::move(roles));

    std::vector<std::size_t> shrink(ring.coeff->size(), VarTable::npos);
    shrink[ring.coeff->parameter_index()] = ptable->parameter_index();
    for (auto zi : out.chosen)
        shrink[ring.coeff->index(ring.names[zi])] = ptable->index(ring.names[zi]);

    DesingProblem dp;
    dp.precision = p.precision;
    dp.table = ptable;
    for (auto zi : out.chosen) dp.unknowns.push_back(ptable->index(ring.names[zi]));
    for (const auto& g : J) {
        for (const auto& t : g.terms())
            for (std::size_t v = 0; v < ring.coeff->size(); ++v)
                if (t.mon.exps[v] > 0 && shrink[v] == VarTable::npos)
                    fail(ErrorKind::Validation,
                         "presentation uses a coefficient variable outside the flattened ring");
        dp.ideal_gens.push_back(remap(g, ptable, shrink));
    }
    for (auto zi : out.chosen) dp.point.push_back(poly_from_series(out.series[zi], ptable));
    dp.d_mode = p.d_mode;

    // resolve hints against the flattened ring
    if (p.hint_f) dp.hints.f_indices = *p.hint_f;
    if (p.hint_L_text) dp.hints.L = parse_polynomial(*p.hint_L_text, ptable);
    if (p.hint_minor_rows || p.hint_minor_cols) {
        if (!p.hint_minor_rows || !p.hint_minor_cols)
            fail(ErrorKind::Validation, "minor hint needs both rows and cols");
        MinorPosition mp;
        for (const auto& tok : *p.hint_minor_rows) {
            std::size_t v = std::stoul(tok);
            if (v == 0) fail(ErrorKind::Validation, "minor hint rows are 1-based");
            mp.rows.push_back(v - 1);
        }
        for (const auto& tok : *p.hint_minor_cols) {
            bool numeric = !tok.empty() && std::isdigit(static_cast<unsigned char>(tok[0]));
            if (numeric) {
                std::size_t v = std::stoul(tok);
                if (v == 0 || v > dp.unknowns.size())
                    fail(ErrorKind::Validation, "minor hint column out of range");
                mp.cols.push_back(v - 1);
            } else {
                bool found = false;
                for (std::size_t k = 0; k < dp.unknowns.size(); ++k)
                    if (ptable->name(dp.unknowns[k]) == tok) {
                        mp.cols.push_back(k);
                        found = true;
                        break;
                    }
                if (!found)
                    fail(ErrorKind::Validation, "minor hint column is not a flattened unknown: " + tok);
            }
        }
        dp.hints.minor = std::move(mp);
    }
    dp.validate();

    if (p.presentation_J) {
        // vanishing check of the user presentation on the table mod x^N
        std::map<std::size_t, TruncatedSeries> assign;
        for (std::size_t k = 0; k < out.chosen.size(); ++k)
            assign.emplace(dp.unknowns[k], out.series[out.chosen[k]]);
        for (const auto& g : dp.ideal_gens) {
            TruncatedSeries val(p.precision);
            std::size_t xi = ptable->parameter_index();
            std::map<std::size_t, std::vector<TruncatedSeries>> powers;
            auto power_of = [&](std::size_t v, std::uint32_t e) -> const TruncatedSeries& {
                auto& vec = powers[v];
                if (vec.empty()) {
                    TruncatedSeries one(p.precision);
                    one.at(0) = 1;
                    vec.push_back(one);
                }
                while (vec.size() <= e) vec.push_back(series_mul(vec.back(), assign.at(v)));
                return vec[e];
            };
            for (const auto& t : g.terms()) {
                TruncatedSeries term(p.precision);
                term.at(0) = t.coeff;
                bool dead = false;
                for (std::size_t v = 0; v < ptable->size() && !dead; ++v) {
                    std::uint32_t e = t.mon.exps[v];
                    if (!e) continue;
                    if (v == xi) {
                        if (e >= p.precision) dead = true;
                        else term = series_shift(term, e);
                    } else {
                        term = series_mul(term, power_of(v, e));
                    }
                }
                if (!dead) val = series_add(val, term);
            }
            if (!val.is_zero())
                fail(ErrorKind::RelationViolated,
                     "presentation relation does not vanish on the series table mod x^N: " +
                         g.str());
        }
    }

    out.problem = std::move(dp);
    return out;
}

SpecialPresentation descend_tensor(const DesingResult& inner, const SpecialProblem& p,
                                   const Flattened& flat) {
    if (!inner.presentation) fail(ErrorKind::Internal, "descend: inner run has no presentation");
    const SmoothPresentation& pres = *inner.presentation;
    std::size_t m = p.base.t_table->size();

    // eta clears x-denominators; truncated data is polynomial, so eta = 1
    // (kept as an explicit element of the output for the general contract)

    // output table: [T..., inner output vars..., leftover coefficient vars...]
    std::vector<std::string> names;
    std::vector<VarRole> roles;
    for (std::size_t v = 0; v < m; ++v) {
        names.push_back(p.base.t_table->name(v));
        roles.push_back(VarRole::Nilpotent);
    }
    for (std::size_t v = 0; v < pres.out_table->size(); ++v) {
        names.push_back(pres.out_table->name(v));
        roles.push_back(pres.out_table->role(v));
    }
    std::vector<std::string> free_names;
    for (auto zi : flat.leftover) free_names.push_back(flat.coeff_names[zi]);
    for (const auto& fn : free_names) {
        names.push_back(fn);
        roles.push_back(VarRole::Unknown);
    }
    VarTablePtr out_table = make_table(std::move(names), std::move(roles));

    auto lift_t = [&](const Polynomial& q) {
        std::vector<std::size_t> mp(p.base.t_table->size());
        for (std::size_t v = 0; v < mp.size(); ++v) mp[v] = out_table->index(p.base.t_table->name(v));
        return remap(q, out_table, mp);
    };
    auto lift_inner = [&](const Polynomial& q) {
        std::vector<std::size_t> mp(pres.out_table->size());
        for (std::size_t v = 0; v < mp.size(); ++v) mp[v] = out_table->index(pres.out_table->name(v));
        return remap(q, out_table, mp);
    };

    SpecialPresentation out;
    out.precision = p.precision;
    out.base = p.base;
    out.out_table = out_table;
    for (const auto& g : p.base.relations) out.base_relations.push_back(lift_t(g));
    for (const auto& g : pres.relations) out.relations.push_back(lift_inner(g));
    for (const auto& s : pres.inverted) out.inverted.push_back(lift_inner(s));
    out.eta = Polynomial::constant(out_table, 1);
    out.free_vars = free_names;
    out.inner = inner;
    out.flat = flat;

    // pi: Y_i -> sum over basis of T^alpha * image(Z_{i,alpha})
    std::map<std::size_t, std::size_t> chosen_pos; // coeff var index -> position among chosen
    for (std::size_t k = 0; k < flat.chosen.size(); ++k) chosen_pos.emplace(flat.chosen[k], k);
    for (std::size_t i = 0; i < p.unknowns.size(); ++i) {
        Polynomial img(out_table);
        for (std::size_t zi = 0; zi < flat.coeff_names.size(); ++zi) {
            if (flat.coeff_keys[zi].first != i) continue;
            std::size_t b = flat.coeff_keys[zi].second;
            Polynomial tmon(out_table);
            {
                Monomial mm(out_table->size());
                for (std::size_t v = 0; v < m; ++v)
                    mm.exps[out_table->index(p.base.t_table->name(v))] = p.base.basis[b].exps[v];
                tmon = Polynomial::term(out_table, mm, Rat(1));
            }
            Polynomial zimg(out_table);
            auto it = chosen_pos.find(zi);
            if (it != chosen_pos.end()) {
                zimg = lift_inner(pres.substitution[it->second]);
            } else {
                zimg = Polynomial::variable(out_table, out_table->index(flat.coeff_names[zi]));
            }
            img += tmon * zimg;
        }
        out.pi.push_back(std::move(img));
    }
    return out;
}

SpecialResult special_desingularization(const SpecialProblem& p) {
    SpecialResult res;
    Flattened flat = flatten(p);
    DesingResult inner = desingularize(flat.problem);
    switch (inner.status) {
        case DesingStatus::NotWellChosen:
            res.status = DesingStatus::NotWellChosen;
            res.message = "the algorithm fails since the bound is too small";
            return res;
        case DesingStatus::NoSystem:
            res.status = DesingStatus::NoSystem;
            res.message = inner.message;
            return res;
        default: break;
    }
    res.status = inner.status;
    res.presentation = descend_tensor(inner, p, flat);
    return res;
}

} // namespace neron
