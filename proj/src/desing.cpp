#include "neron/desing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace neron {

namespace {

std::vector<std::vector<std::size_t>> index_combinations(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    if (r > n || r == 0) return out;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = r;
        bool done = true;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - r) {
                done = false;
                break;
            }
        }
        if (done) return out;
        ++idx[i];
        for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

void DesingProblem::validate() const {
    if (precision == 0) fail(ErrorKind::Validation, "precision must be positive");
    if (!table) fail(ErrorKind::Validation, "missing variable table");
    if (table->parameter_index() == VarTable::npos)
        fail(ErrorKind::Validation, "table has no base parameter");
    if (unknowns.empty()) fail(ErrorKind::Validation, "no unknowns");
    if (ideal_gens.empty()) fail(ErrorKind::Validation, "empty ideal");
    for (const auto& g : ideal_gens) {
        require_same_table(table, g.table());
        if (g.is_zero()) fail(ErrorKind::Validation, "zero ideal generator");
    }
    if (point.size() != unknowns.size())
        fail(ErrorKind::Validation, "point must assign every unknown");
    std::size_t xi = x_index();
    for (const auto& p : point) {
        require_same_table(table, p.table());
        for (const auto& t : p.terms()) {
            for (std::size_t v = 0; v < table->size(); ++v)
                if (v != xi && t.mon.exps[v] != 0)
                    fail(ErrorKind::Validation, "point component must involve only the parameter");
            if (t.mon.exps[xi] >= precision)
                fail(ErrorKind::Validation, "point component degree must be below the precision");
        }
    }
    if (hints.f_indices) {
        for (auto i : *hints.f_indices)
            if (i >= ideal_gens.size()) fail(ErrorKind::Validation, "hint f index out of range");
        if (hints.f_indices->empty()) fail(ErrorKind::Validation, "hint f subset is empty");
        if (hints.f_indices->size() > unknowns.size())
            fail(ErrorKind::Validation, "hint f subset larger than the number of unknowns");
    }
}

namespace {

std::map<std::size_t, Polynomial> point_images(const DesingProblem& p) {
    std::map<std::size_t, Polynomial> images;
    for (std::size_t i = 0; i < p.unknowns.size(); ++i) images.emplace(p.unknowns[i], p.point[i]);
    return images;
}

struct Candidate {
    std::size_t subset_rank;
    std::size_t l_index;
    std::size_t minor_rank;
    std::optional<std::size_t> c; // order of L(y') M(y'), when below N
};

struct SubsetData {
    std::vector<std::size_t> f_indices;
    std::vector<Polynomial> l_candidates;
    std::vector<MinorEntry> minors;
};

} // namespace

SystemChoice select_system(const DesingProblem& p) {
    p.validate();
    std::size_t n = p.unknowns.size();
    std::size_t q = p.ideal_gens.size();
    auto images = point_images(p);

    Ideal full(p.table, p.ideal_gens);

    std::vector<std::vector<std::size_t>> subsets;
    if (p.hints.f_indices) {
        auto s = *p.hints.f_indices;
        std::sort(s.begin(), s.end());
        subsets.push_back(std::move(s));
    } else {
        for (std::size_t r = 1; r <= std::min(n, q); ++r)
            for (auto& s : index_combinations(q, r)) subsets.push_back(s);
    }

    // Assemble candidate data per subset, then evaluate orders in parallel.
    std::vector<SubsetData> data;
    for (const auto& sub : subsets) {
        SubsetData sd;
        sd.f_indices = sub;
        std::vector<Polynomial> fsub;
        for (auto i : sub) fsub.push_back(p.ideal_gens[i]);
        Ideal fs(p.table, fsub);

        if (p.hints.L) {
            // membership-check the hinted witness: L * I must lie in (f)
            GroebnerBasis G = buchberger(fs);
            bool ok = true;
            for (const auto& g : p.ideal_gens)
                if (!normal_form(*p.hints.L * g, G).is_zero()) {
                    ok = false;
                    break;
                }
            if (!ok) {
                if (p.hints.f_indices)
                    fail(ErrorKind::Validation, "hinted L is not a colon witness for the subset");
                continue;
            }
            sd.l_candidates.push_back(*p.hints.L);
        } else {
            Ideal colon = ideal_quotient(fs, full);
            sd.l_candidates = colon.gens;
        }
        if (sd.l_candidates.empty()) continue;

        PolyMatrix J = jacobian(fsub, p.unknowns, p.table);
        if (p.hints.minor) {
            MinorPosition mp = *p.hints.minor;
            if (mp.rows.size() != sub.size() || mp.cols.size() != sub.size()) {
                if (p.hints.f_indices)
                    fail(ErrorKind::Validation, "hint minor size must match the subset size");
                continue; // the hint pins the minor size; other subset sizes drop out
            }
            for (auto rix : mp.rows)
                if (rix >= sub.size()) fail(ErrorKind::Validation, "hint minor row out of range");
            for (auto cix : mp.cols)
                if (cix >= n) fail(ErrorKind::Validation, "hint minor column out of range");
            Polynomial value = determinant(J.submatrix(mp.rows, mp.cols));
            sd.minors.push_back({mp.rows, mp.cols, value});
        } else {
            sd.minors = all_minors_serial(J, sub.size());
        }
        data.push_back(std::move(sd));
    }

    // Flatten the (subset, L, minor) space.
    std::vector<Candidate> cands;
    for (std::size_t si = 0; si < data.size(); ++si)
        for (std::size_t li = 0; li < data[si].l_candidates.size(); ++li)
            for (std::size_t mi = 0; mi < data[si].minors.size(); ++mi)
                cands.push_back({si, li, mi, std::nullopt});

    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < total; ++t) {
        Candidate& cd = cands[t];
        const SubsetData& sd = data[cd.subset_rank];
        const Polynomial& L = sd.l_candidates[cd.l_index];
        const Polynomial& M = sd.minors[cd.minor_rank].value;
        if (M.is_zero()) continue;
        Polynomial v = substitute(L * M, images);
        XOrder ord = x_order(v);
        if (!ord.infinite && ord.value < p.precision) cd.c = ord.value;
    }

    // Deterministic fold: minimal c, ties in enumeration order.
    const Candidate* best = nullptr;
    for (const auto& cd : cands) {
        if (!cd.c) continue;
        if (!best || *cd.c < *best->c) best = &cd;
    }
    if (!best)
        fail(ErrorKind::NoSystem,
             "no admissible system: v(((f):I)*minors) lies in (x)^N at this precision");

    const SubsetData& sd = data[best->subset_rank];
    SystemChoice choice;
    choice.f_indices = sd.f_indices;
    choice.r = sd.f_indices.size();
    choice.L = sd.l_candidates[best->l_index];
    choice.minor = {sd.minors[best->minor_rank].rows, sd.minors[best->minor_rank].cols};
    choice.minor_value = sd.minors[best->minor_rank].value;
    choice.c = *best->c;

    // H layout and the exact P = L * det(H)
    std::vector<Polynomial> fsub;
    for (auto i : choice.f_indices) fsub.push_back(p.ideal_gens[i]);
    PolyMatrix J = jacobian(fsub, p.unknowns, p.table);
    PolyMatrix Jrows = J.submatrix(choice.minor.rows, [&] {
        std::vector<std::size_t> allc(n);
        for (std::size_t i = 0; i < n; ++i) allc[i] = i;
        return allc;
    }());
    PolyMatrix H = border(Jrows, choice.minor.cols, &choice.permutation);
    // The localization shortcut inverts L*M itself; the full construction
    // works with the bordered determinant, whose sign the layout fixes.
    choice.P = choice.c == 0 ? choice.L * choice.minor_value : choice.L * determinant(H);

    Polynomial Pval = substitute(choice.P, images);
    XOrder c2 = x_order(Pval);
    if (c2.infinite || c2.value != choice.c)
        fail(ErrorKind::Internal, "P(y') order disagrees with the selected c");
    std::size_t xi = p.x_index();
    if (p.d_mode == DMode::Normalized) {
        choice.d = Polynomial::variable(p.table, xi, static_cast<std::uint32_t>(choice.c));
        choice.e = exact_divide(Pval, choice.d);
    } else {
        choice.d = Pval;
        choice.e = Polynomial::constant(p.table, 1);
    }
    return choice;
}

LInvariantReport l_invariant(const DesingProblem& p, const std::vector<std::size_t>& f_indices) {
    p.validate();
    if (f_indices.empty()) fail(ErrorKind::Validation, "empty system");
    for (auto i : f_indices)
        if (i >= p.ideal_gens.size()) fail(ErrorKind::Validation, "system index out of range");
    auto images = point_images(p);
    std::vector<Polynomial> fsub;
    for (auto i : f_indices) fsub.push_back(p.ideal_gens[i]);
    PolyMatrix J = jacobian(fsub, p.unknowns, p.table);
    std::size_t r = f_indices.size();
    if (r > p.unknowns.size()) fail(ErrorKind::Validation, "system larger than unknown count");

    LInvariantReport rep;
    rep.r = r;
    auto minors = all_minors(J, r);
    for (auto& m : minors) {
        LInvariantEntry e;
        e.position = {m.rows, m.cols};
        e.minor = m.value;
        if (!m.value.is_zero()) {
            XOrder ord = x_order(substitute(m.value, images));
            if (!ord.infinite && ord.value < p.precision) e.order = ord.value;
        }
        if (e.order && (!rep.l || *e.order < *rep.l)) rep.l = *e.order;
        rep.table.push_back(std::move(e));
    }
    return rep;
}

namespace {

// Fresh auxiliary names T1..Tn, uniquified against the table.
std::vector<std::string> fresh_aux_names(const VarTablePtr& vt, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) {
        std::string base = "T" + std::to_string(i);
        while (vt->has(base)) base = "T" + base;
        names.push_back(base);
    }
    return names;
}

bool in_aux_square(const Polynomial& p, const std::vector<std::size_t>& aux) {
    for (const auto& t : p.terms()) {
        std::uint64_t d = 0;
        for (auto v : aux) d += t.mon.exps[v];
        if (d < 2) return false;
    }
    return true;
}

} // namespace

TaylorSplit taylor_split(const std::vector<Polynomial>& f, const std::vector<Polynomial>& fy,
                         const std::vector<Polynomial>& fb, const SystemChoice& choice,
                         const VarTablePtr& ext, const std::vector<std::size_t>& aux_vars,
                         std::size_t precision) {
    (void)f;
    std::size_t r = choice.r;
    TaylorSplit out;

    // d, e live in the problem table; the caller passes fy/fb in ext, so lift
    std::vector<std::size_t> lift_map(choice.d.table()->size());
    for (std::size_t i = 0; i < lift_map.size(); ++i)
        lift_map[i] = ext->index(choice.d.table()->name(i));
    Polynomial d = remap(choice.d, ext, lift_map);
    Polynomial e = remap(choice.e, ext, lift_map);
    out.e = e;
    Polynomial d2 = d * d;

    for (std::size_t i = 0; i < r; ++i) {
        XOrder o = x_content_order(fy[i]);
        if (!o.infinite && o.value < 2 * choice.c + 1)
            fail(ErrorKind::ApproxTooCoarse,
                 "f(y') is not divisible by x^(2c+1): the approximation is inconsistent "
                 "with the claimed bound");
        Polynomial a;
        try {
            a = exact_divide(fy[i], d2);
        } catch (const Error&) {
            fail(ErrorKind::Validation,
                 "exact d-mode requires d^2 to divide f(y') in Q[x]; use the normalized mode");
        }
        XOrder oa = x_content_order(a);
        if (!oa.infinite && oa.value < 1)
            fail(ErrorKind::Internal, "taylor split: a is not in x*Q[x]");

        Polynomial linear = d2 * e * Polynomial::variable(ext, aux_vars[i]);
        Polynomial rest = fb[i] - fy[i] - linear;
        Polynomial qi;
        try {
            qi = exact_divide(rest, d2);
        } catch (const Error&) {
            fail(ErrorKind::Internal, "taylor split: higher-order part not divisible by d^2");
        }
        if (!in_aux_square(qi, aux_vars))
            fail(ErrorKind::Internal, "taylor split: Q has terms of degree below 2 in T");
        out.a.push_back(std::move(a));
        out.q.push_back(std::move(qi));
    }
    (void)precision;
    return out;
}

SmoothPresentation build_desingularization(const DesingProblem& p, const SystemChoice& choice) {
    p.validate();
    std::size_t n = p.unknowns.size();
    std::size_t r = choice.r;
    std::size_t N = p.precision;

    if (choice.c == 0) {
        SmoothPresentation out;
        out.kind = PresentationKind::LocalizationOnly;
        out.precision = N;
        out.out_table = p.table;
        out.relations = p.ideal_gens;
        out.inverted = {choice.P};
        for (std::size_t i = 0; i < n; ++i)
            out.substitution.push_back(Polynomial::variable(p.table, p.unknowns[i]));
        out.certificate = choice;
        return out;
    }

    if (2 * choice.c + 1 > N)
        fail(ErrorKind::NotWellChosen, "y', N are not well chosen");

    // extended table [x, Y..., T1..Tn]
    std::vector<std::string> names = p.table->names();
    std::vector<VarRole> roles;
    for (std::size_t i = 0; i < p.table->size(); ++i) roles.push_back(p.table->role(i));
    auto aux_names = fresh_aux_names(p.table, n);
    for (auto& s : aux_names) {
        names.push_back(s);
        roles.push_back(VarRole::Aux);
    }
    VarTablePtr ext = make_table(std::move(names), std::move(roles));
    std::vector<std::size_t> lift_map(p.table->size());
    for (std::size_t i = 0; i < lift_map.size(); ++i) lift_map[i] = i;
    std::vector<std::size_t> aux_vars;
    for (std::size_t i = 0; i < n; ++i) aux_vars.push_back(p.table->size() + i);

    auto lift = [&](const Polynomial& q) { return remap(q, ext, lift_map); };

    std::vector<Polynomial> fsub;
    for (auto i : choice.f_indices) fsub.push_back(lift(p.ideal_gens[i]));
    std::vector<std::size_t> unknowns_ext = p.unknowns; // same indices in ext

    PolyMatrix J = jacobian(fsub, unknowns_ext, ext);
    std::vector<std::size_t> allc(n);
    for (std::size_t i = 0; i < n; ++i) allc[i] = i;
    PolyMatrix Jrows = J.submatrix(choice.minor.rows, allc);
    std::vector<std::size_t> layout;
    PolyMatrix H = border(Jrows, choice.minor.cols, &layout);
    PolyMatrix G = adjugate(H).scaled(lift(choice.L));

    std::map<std::size_t, Polynomial> images;
    for (std::size_t i = 0; i < n; ++i) images.emplace(unknowns_ext[i], lift(p.point[i]));

    Polynomial d = lift(choice.d);

    // evaluate G at y' and form the substitution b per layout position
    std::map<std::size_t, Polynomial> to_b; // unknown ext index -> image
    std::vector<Polynomial> b_by_position(n, Polynomial(ext));
    for (std::size_t j = 0; j < n; ++j) {
        Polynomial acc = lift(p.point[layout[j]]);
        for (std::size_t k = 0; k < n; ++k) {
            Polynomial gy = substitute(G.at(j, k), images);
            if (gy.is_zero()) continue;
            acc += d * gy * Polynomial::variable(ext, aux_vars[k]);
        }
        b_by_position[j] = acc;
        to_b.emplace(unknowns_ext[layout[j]], acc);
    }

    std::vector<Polynomial> fy, fb;
    for (std::size_t i = 0; i < r; ++i) {
        fy.push_back(substitute(fsub[i], images));
        fb.push_back(substitute(fsub[i], to_b));
    }

    TaylorSplit split = taylor_split(fsub, fy, fb, choice, ext, aux_vars, N);

    std::vector<Polynomial> g;
    Polynomial d2 = d * d;
    for (std::size_t i = 0; i < r; ++i) {
        Polynomial gi = split.a[i] + split.e * Polynomial::variable(ext, aux_vars[i]) + split.q[i];
        if (fb[i] != d2 * gi)
            fail(ErrorKind::Internal, "defining identity f(b) = d^2 g failed");
        g.push_back(std::move(gi));
    }

    // s: leading r x r minor of dg/dT ; s': P(b)/d
    PolyMatrix dgdT = jacobian(g, aux_vars, ext);
    std::vector<std::size_t> firstr;
    for (std::size_t i = 0; i < r; ++i) firstr.push_back(i);
    Polynomial s = determinant(dgdT.submatrix(firstr, firstr));
    Polynomial Pb = substitute(lift(choice.P), to_b);
    Polynomial sprime = exact_divide(Pb, d);

    SmoothPresentation out;
    out.kind = PresentationKind::Full;
    out.precision = N;
    out.out_table = ext;
    out.aux_vars = aux_vars;
    out.relations = std::move(g);
    out.inverted = {std::move(s), std::move(sprime)};
    for (std::size_t i = 0; i < n; ++i) out.substitution.push_back(to_b.at(unknowns_ext[i]));
    out.certificate = choice;
    out.certificate.permutation = layout;
    out.a_parts = split.a;
    out.q_parts = split.q;
    return out;
}

namespace {

TruncatedSeries eval_at_series(const Polynomial& poly, std::size_t xi,
                               const std::map<std::size_t, TruncatedSeries>& assign,
                               std::size_t N) {
    TruncatedSeries acc(N);
    std::map<std::size_t, std::vector<TruncatedSeries>> powers;
    auto power_of = [&](std::size_t v, std::uint32_t e) -> const TruncatedSeries& {
        auto& vec = powers[v];
        if (vec.empty()) {
            TruncatedSeries one(N);
            one.at(0) = 1;
            vec.push_back(one);
        }
        while (vec.size() <= e) vec.push_back(series_mul(vec.back(), assign.at(v)));
        return vec[e];
    };
    for (const auto& t : poly.terms()) {
        TruncatedSeries term(N);
        term.at(0) = t.coeff;
        bool dead = false;
        for (std::size_t v = 0; v < poly.table()->size() && !dead; ++v) {
            std::uint32_t e = t.mon.exps[v];
            if (!e) continue;
            if (v == xi) {
                if (e >= N) dead = true;
                else term = series_shift(term, e);
            } else {
                auto it = assign.find(v);
                if (it == assign.end())
                    fail(ErrorKind::Internal, "series evaluation: unassigned variable");
                term = series_mul(term, power_of(v, e));
            }
        }
        if (!dead) acc = series_add(acc, term);
    }
    return acc;
}

} // namespace

LiftResult lift_point(const DesingProblem& p, const SmoothPresentation& pres) {
    if (pres.kind != PresentationKind::Full)
        fail(ErrorKind::Validation, "lift requires a full presentation");
    std::size_t N = p.precision;
    std::size_t n = p.unknowns.size();
    std::size_t r = pres.certificate.r;
    const VarTablePtr& ext = pres.out_table;
    std::size_t xi = ext->parameter_index();

    // e as a series and its inverse
    std::vector<std::size_t> lift_map(pres.certificate.e.table()->size());
    for (std::size_t i = 0; i < lift_map.size(); ++i)
        lift_map[i] = ext->index(pres.certificate.e.table()->name(i));
    Polynomial e_ext = remap(pres.certificate.e, ext, lift_map);
    TruncatedSeries e_series = eval_at_series(e_ext, xi, {}, N);
    if (rat_is_zero(e_series[0])) fail(ErrorKind::NonUnit, "e is not a unit");
    TruncatedSeries e_inv = series_inverse(e_series);

    std::vector<TruncatedSeries> a_series;
    for (std::size_t i = 0; i < r; ++i) a_series.push_back(eval_at_series(pres.a_parts[i], xi, {}, N));

    std::vector<TruncatedSeries> t(n, TruncatedSeries(N));
    bool converged = false;
    for (std::size_t iter = 0; iter <= N + 1; ++iter) {
        std::map<std::size_t, TruncatedSeries> assign;
        for (std::size_t k = 0; k < n; ++k) assign.emplace(pres.aux_vars[k], t[k]);
        std::vector<TruncatedSeries> next = t;
        for (std::size_t i = 0; i < r; ++i) {
            TruncatedSeries qi = eval_at_series(pres.q_parts[i], xi, assign, N);
            next[i] = series_scale(series_mul(series_add(a_series[i], qi), e_inv), Rat(-1));
        }
        bool same = true;
        for (std::size_t i = 0; i < r && same; ++i) same = next[i] == t[i];
        t = std::move(next);
        if (same) {
            converged = true;
            break;
        }
    }
    if (!converged)
        fail(ErrorKind::Internal, "fixed-point lift did not converge within the precision");

    // exact y* = b(t*) over the problem table
    std::map<std::size_t, Polynomial> tmap;
    for (std::size_t k = 0; k < n; ++k)
        tmap.emplace(pres.aux_vars[k], poly_from_series(t[k], ext));
    std::vector<std::size_t> back(ext->size(), VarTable::npos);
    for (std::size_t i = 0; i < p.table->size(); ++i) back[ext->index(p.table->name(i))] = i;

    LiftResult out;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial y = substitute(pres.substitution[i], tmap);
        out.y_star.push_back(remap(y, p.table, back));
    }
    for (std::size_t k = 0; k < n; ++k) out.t_star.push_back(t[k]);

    std::map<std::size_t, Polynomial> ymap;
    for (std::size_t i = 0; i < n; ++i) ymap.emplace(p.unknowns[i], out.y_star[i]);
    for (auto i : pres.certificate.f_indices) {
        Polynomial resid = substitute(p.ideal_gens[i], ymap);
        XOrder o = x_order(resid);
        out.residual_orders.push_back(o.infinite ? static_cast<std::size_t>(-1) : o.value);
    }
    return out;
}

DesingResult desingularize(const DesingProblem& p) {
    DesingResult res;
    SystemChoice choice;
    try {
        choice = select_system(p);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::NoSystem) {
            res.status = DesingStatus::NoSystem;
            res.message = err.what();
            return res;
        }
        throw;
    }
    res.choice = choice;
    res.l_table = l_invariant(p, choice.f_indices);
    try {
        res.presentation = build_desingularization(p, choice);
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::NotWellChosen) {
            res.status = DesingStatus::NotWellChosen;
            res.message = err.what();
            return res;
        }
        throw;
    }
    if (res.presentation->kind == PresentationKind::LocalizationOnly) {
        res.status = DesingStatus::Localization;
    } else {
        res.status = DesingStatus::Smooth;
        res.lift = lift_point(p, *res.presentation);
    }
    return res;
}

} // namespace neron
