#include "neron/io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "neron/expr.hpp"

namespace neron {

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::vector<std::string> string_list(const Json& j, const std::string& what) {
    if (!j.is_array()) fail(ErrorKind::Validation, what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) fail(ErrorKind::Validation, what + " must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

DMode parse_dmode(const std::string& s) {
    if (s == "normalized") return DMode::Normalized;
    if (s == "exact") return DMode::Exact;
    fail(ErrorKind::Validation, "d_mode must be \"normalized\" or \"exact\"");
}

const char* dmode_str(DMode m) { return m == DMode::Normalized ? "normalized" : "exact"; }

std::string mon_str(const VarTable& vt, const Monomial& m) {
    if (m.is_one()) return "1";
    std::ostringstream os;
    bool printed = false;
    for (std::size_t v = 0; v < vt.size(); ++v) {
        std::uint32_t e = m.exps[v];
        if (!e) continue;
        if (printed) os << "*";
        os << vt.name(v);
        if (e > 1) os << "^" << e;
        printed = true;
    }
    return os.str();
}

} // namespace

ProblemFile parse_problem(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& ex) {
        fail(ErrorKind::ParseError, std::string("problem file: ") + ex.what());
    }
    if (!j.is_object()) fail(ErrorKind::Validation, "problem file must be a JSON object");

    ProblemFile pf;
    if (!j.contains("precision") || !j["precision"].is_number_unsigned() ||
        j["precision"].get<std::size_t>() == 0)
        fail(ErrorKind::Validation, "precision must be a positive integer");
    pf.precision = j["precision"].get<std::size_t>();

    std::string kind = "dvr";
    if (j.contains("base")) {
        const Json& b = j["base"];
        if (!b.is_object() || !b.contains("kind") || !b["kind"].is_string())
            fail(ErrorKind::Validation, "base must carry a kind");
        kind = b["kind"].get<std::string>();
        if (kind == "artinian") {
            pf.artinian = true;
            if (!b.contains("t_vars") || !b.contains("relations_a"))
                fail(ErrorKind::Validation, "artinian base needs t_vars and relations_a");
            pf.t_vars = string_list(b["t_vars"], "t_vars");
            pf.relations_a = string_list(b["relations_a"], "relations_a");
            if (pf.t_vars.empty()) fail(ErrorKind::Validation, "artinian base needs t_vars");
            for (const auto& t : pf.t_vars)
                if (!valid_identifier(t) || t == "x")
                    fail(ErrorKind::Validation, "bad nilpotent variable name: " + t);
        } else if (kind != "dvr") {
            fail(ErrorKind::Validation, "base kind must be \"dvr\" or \"artinian\"");
        }
    }

    if (!j.contains("unknowns")) fail(ErrorKind::Validation, "missing unknowns");
    pf.unknowns = string_list(j["unknowns"], "unknowns");
    if (pf.unknowns.empty()) fail(ErrorKind::Validation, "unknowns must be nonempty");
    for (const auto& u : pf.unknowns) {
        if (!valid_identifier(u) || u == "x")
            fail(ErrorKind::Validation, "bad unknown name: " + u);
        for (const auto& t : pf.t_vars)
            if (u == t) fail(ErrorKind::Validation, "unknown clashes with a base variable: " + u);
    }
    for (std::size_t i = 0; i < pf.unknowns.size(); ++i)
        for (std::size_t k = i + 1; k < pf.unknowns.size(); ++k)
            if (pf.unknowns[i] == pf.unknowns[k])
                fail(ErrorKind::Validation, "duplicate unknown: " + pf.unknowns[i]);

    if (!j.contains("ideal")) fail(ErrorKind::Validation, "missing ideal");
    pf.ideal = string_list(j["ideal"], "ideal");
    if (pf.ideal.empty()) fail(ErrorKind::Validation, "ideal must be nonempty");

    if (!j.contains("point") || !j["point"].is_object())
        fail(ErrorKind::Validation, "missing point");
    const Json& pt = j["point"];
    if (!pf.artinian) {
        for (const auto& u : pf.unknowns) {
            if (!pt.contains(u) || !pt[u].is_string())
                fail(ErrorKind::Validation, "point must give a series expression for " + u);
            pf.point_dvr.push_back({u, pt[u].get<std::string>()});
        }
        for (auto it = pt.begin(); it != pt.end(); ++it) {
            bool known = false;
            for (const auto& u : pf.unknowns) known = known || u == it.key();
            if (!known) fail(ErrorKind::Validation, "point names a non-unknown: " + it.key());
        }
    } else {
        for (auto it = pt.begin(); it != pt.end(); ++it) {
            bool known = false;
            for (const auto& u : pf.unknowns) known = known || u == it.key();
            if (!known) fail(ErrorKind::Validation, "point names a non-unknown: " + it.key());
            if (!it.value().is_object())
                fail(ErrorKind::Validation, "artinian point entries map basis monomials to series");
            for (auto bt = it.value().begin(); bt != it.value().end(); ++bt) {
                if (!bt.value().is_string())
                    fail(ErrorKind::Validation, "point series must be strings");
                pf.point_art.push_back({it.key(), bt.key(), bt.value().get<std::string>()});
            }
        }
    }

    if (j.contains("presentation_J"))
        pf.presentation_J = string_list(j["presentation_J"], "presentation_J");

    if (j.contains("hints")) {
        const Json& h = j["hints"];
        if (!h.is_object()) fail(ErrorKind::Validation, "hints must be an object");
        if (h.contains("f")) {
            if (!h["f"].is_array()) fail(ErrorKind::Validation, "hints.f must be an index array");
            std::vector<std::size_t> f;
            for (const auto& e : h["f"]) {
                if (!e.is_number_unsigned() || e.get<std::size_t>() == 0)
                    fail(ErrorKind::Validation, "hints.f entries are 1-based indices");
                f.push_back(e.get<std::size_t>());
            }
            pf.hint_f = std::move(f);
        }
        if (h.contains("L")) {
            if (!h["L"].is_string()) fail(ErrorKind::Validation, "hints.L must be a string");
            pf.hint_L = h["L"].get<std::string>();
        }
        if (h.contains("minor")) {
            const Json& m = h["minor"];
            if (!m.is_object() || !m.contains("rows") || !m.contains("cols"))
                fail(ErrorKind::Validation, "hints.minor needs rows and cols");
            std::vector<std::string> rows, cols;
            for (const auto& e : m["rows"]) {
                if (e.is_number_unsigned())
                    rows.push_back(std::to_string(e.get<std::size_t>()));
                else
                    fail(ErrorKind::Validation, "hints.minor.rows holds 1-based indices");
            }
            for (const auto& e : m["cols"]) {
                if (e.is_number_unsigned())
                    cols.push_back(std::to_string(e.get<std::size_t>()));
                else if (e.is_string())
                    cols.push_back(e.get<std::string>());
                else
                    fail(ErrorKind::Validation, "hints.minor.cols holds indices or names");
            }
            pf.hint_minor_rows = std::move(rows);
            pf.hint_minor_cols = std::move(cols);
        }
    }

    if (j.contains("d_mode")) {
        if (!j["d_mode"].is_string()) fail(ErrorKind::Validation, "d_mode must be a string");
        pf.d_mode = parse_dmode(j["d_mode"].get<std::string>());
    }
    return pf;
}

Json emit_problem(const ProblemFile& pf) {
    Json j;
    j["precision"] = pf.precision;
    if (pf.artinian) {
        j["base"] = {{"kind", "artinian"}, {"t_vars", pf.t_vars}, {"relations_a", pf.relations_a}};
    } else {
        j["base"] = {{"kind", "dvr"}};
    }
    j["unknowns"] = pf.unknowns;
    j["ideal"] = pf.ideal;
    Json pt = Json::object();
    if (!pf.artinian) {
        for (const auto& [u, e] : pf.point_dvr) pt[u] = e;
    } else {
        for (const auto& [u, b, e] : pf.point_art) pt[u][b] = e;
    }
    j["point"] = pt;
    if (pf.presentation_J) j["presentation_J"] = *pf.presentation_J;
    Json h = Json::object();
    if (pf.hint_f) h["f"] = *pf.hint_f;
    if (pf.hint_L) h["L"] = *pf.hint_L;
    if (pf.hint_minor_rows) {
        Json m;
        Json rows = Json::array(), cols = Json::array();
        for (const auto& t : *pf.hint_minor_rows) rows.push_back(std::stoull(t));
        for (const auto& t : *pf.hint_minor_cols) {
            if (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0])))
                cols.push_back(std::stoull(t));
            else
                cols.push_back(t);
        }
        m["rows"] = rows;
        m["cols"] = cols;
        h["minor"] = m;
    }
    if (!h.empty()) j["hints"] = h;
    if (pf.d_mode) j["d_mode"] = dmode_str(*pf.d_mode);
    return j;
}

namespace {

MinorPosition resolve_minor_hint(const std::vector<std::string>& rows,
                                 const std::vector<std::string>& cols,
                                 const VarTablePtr& table,
                                 const std::vector<std::size_t>& unknowns) {
    MinorPosition mp;
    for (const auto& tok : rows) {
        std::size_t v = std::stoul(tok);
        if (v == 0) fail(ErrorKind::Validation, "minor hint rows are 1-based");
        mp.rows.push_back(v - 1);
    }
    for (const auto& tok : cols) {
        bool numeric = !tok.empty() && std::isdigit(static_cast<unsigned char>(tok[0]));
        if (numeric) {
            std::size_t v = std::stoul(tok);
            if (v == 0 || v > unknowns.size())
                fail(ErrorKind::Validation, "minor hint column out of range");
            mp.cols.push_back(v - 1);
        } else {
            bool found = false;
            for (std::size_t k = 0; k < unknowns.size(); ++k)
                if (table->name(unknowns[k]) == tok) {
                    mp.cols.push_back(k);
                    found = true;
                    break;
                }
            if (!found) fail(ErrorKind::Validation, "minor hint column is not an unknown: " + tok);
        }
    }
    return mp;
}

} // namespace

DesingProblem build_dvr(const ProblemFile& pf, std::optional<DMode> mode_override) {
    if (pf.artinian) fail(ErrorKind::Validation, "problem file has an Artinian base");
    std::vector<std::string> names{"x"};
    std::vector<VarRole> roles{VarRole::Parameter};
    for (const auto& u : pf.unknowns) {
        names.push_back(u);
        roles.push_back(VarRole::Unknown);
    }
    VarTablePtr table = make_table(std::move(names), std::move(roles));

    DesingProblem p;
    p.precision = pf.precision;
    p.table = table;
    for (const auto& u : pf.unknowns) p.unknowns.push_back(table->index(u));
    for (const auto& text : pf.ideal) p.ideal_gens.push_back(parse_polynomial(text, table));
    for (const auto& [u, expr] : pf.point_dvr) {
        TruncatedSeries s = eval_series_expr(expr, pf.precision);
        p.point.push_back(poly_from_series(s, table));
    }
    if (pf.hint_f) {
        std::vector<std::size_t> f;
        for (auto i : *pf.hint_f) {
            if (i == 0 || i > pf.ideal.size())
                fail(ErrorKind::Validation, "hint f index out of range");
            f.push_back(i - 1);
        }
        p.hints.f_indices = std::move(f);
    }
    if (pf.hint_L) p.hints.L = parse_polynomial(*pf.hint_L, table);
    if (pf.hint_minor_rows)
        p.hints.minor = resolve_minor_hint(*pf.hint_minor_rows, *pf.hint_minor_cols, table,
                                           p.unknowns);
    p.d_mode = mode_override ? *mode_override : pf.d_mode.value_or(DMode::Normalized);
    p.validate();
    return p;
}

SpecialProblem build_special(const ProblemFile& pf, std::optional<DMode> mode_override) {
    if (!pf.artinian) fail(ErrorKind::Validation, "problem file has a DVR base");
    std::vector<std::string> tnames = pf.t_vars;
    std::vector<VarRole> troles(tnames.size(), VarRole::Nilpotent);
    VarTablePtr t_table = make_table(tnames, troles);
    std::vector<Polynomial> a;
    for (const auto& text : pf.relations_a) a.push_back(parse_polynomial(text, t_table));

    SpecialProblem p;
    p.precision = pf.precision;
    p.base = artinian_basis(t_table, a);

    std::vector<std::string> rnames = pf.t_vars;
    std::vector<VarRole> rroles(rnames.size(), VarRole::Nilpotent);
    for (const auto& u : pf.unknowns) {
        rnames.push_back(u);
        rroles.push_back(VarRole::Unknown);
    }
    p.ring = make_table(std::move(rnames), std::move(rroles));
    for (const auto& u : pf.unknowns) p.unknowns.push_back(p.ring->index(u));
    for (const auto& text : pf.ideal) p.ideal_gens.push_back(parse_polynomial(text, p.ring));

    // default every (unknown, basis) coefficient to zero, then fill
    for (std::size_t i = 0; i < p.unknowns.size(); ++i)
        for (std::size_t b = 0; b < p.base.basis.size(); ++b)
            p.table.emplace(std::make_pair(i, b), TruncatedSeries(pf.precision));
    for (const auto& [u, btext, expr] : pf.point_art) {
        std::size_t ui = static_cast<std::size_t>(-1);
        for (std::size_t i = 0; i < pf.unknowns.size(); ++i)
            if (pf.unknowns[i] == u) ui = i;
        if (ui == static_cast<std::size_t>(-1))
            fail(ErrorKind::Validation, "point names a non-unknown: " + u);
        Polynomial bm = parse_polynomial(btext, t_table);
        if (bm.terms().size() != 1 || bm.leading_term().coeff != 1)
            fail(ErrorKind::Validation, "basis monomial must be a monic monomial: " + btext);
        std::size_t bix = p.base.basis.size();
        for (std::size_t b = 0; b < p.base.basis.size(); ++b)
            if (p.base.basis[b] == bm.leading_term().mon) bix = b;
        if (bix == p.base.basis.size())
            fail(ErrorKind::Validation, "not a standard basis monomial of the base: " + btext);
        p.table.at({ui, bix}) = eval_series_expr(expr, pf.precision);
    }

    p.presentation_J = pf.presentation_J;
    if (pf.hint_f) {
        std::vector<std::size_t> f;
        std::size_t gen_count = pf.presentation_J ? pf.presentation_J->size() : pf.ideal.size();
        for (auto i : *pf.hint_f) {
            if (i == 0 || i > gen_count) fail(ErrorKind::Validation, "hint f index out of range");
            f.push_back(i - 1);
        }
        p.hint_f = std::move(f);
    }
    p.hint_L_text = pf.hint_L;
    p.hint_minor_rows = pf.hint_minor_rows;
    p.hint_minor_cols = pf.hint_minor_cols;
    p.d_mode = mode_override ? *mode_override : pf.d_mode.value_or(DMode::Normalized);
    p.validate();
    return p;
}

namespace {

Json emit_certificate(const DesingProblem& p, const SystemChoice& c,
                      const std::optional<LInvariantReport>& l) {
    Json j;
    Json f = Json::array();
    for (auto i : c.f_indices) f.push_back(i + 1);
    j["f_indices"] = f;
    j["r"] = c.r;
    j["L"] = c.L.str();
    Json rows = Json::array(), cols = Json::array();
    for (auto i : c.minor.rows) rows.push_back(i + 1);
    for (auto i : c.minor.cols) cols.push_back(i + 1);
    j["minor_rows"] = rows;
    j["minor_cols"] = cols;
    j["minor"] = c.minor_value.str();
    j["P"] = c.P.str();
    j["c"] = c.c;
    j["d"] = c.d.str();
    j["e"] = c.e.str();
    Json perm = Json::array();
    for (auto i : c.permutation) perm.push_back(i + 1);
    j["permutation"] = perm;
    if (l) {
        Json table = Json::array();
        for (const auto& ent : l->table) {
            Json e;
            Json r2 = Json::array(), c2 = Json::array();
            for (auto i : ent.position.rows) r2.push_back(i + 1);
            for (auto i : ent.position.cols) c2.push_back(i + 1);
            e["rows"] = r2;
            e["cols"] = c2;
            e["minor"] = ent.minor.str();
            if (ent.order)
                e["order"] = *ent.order;
            else
                e["order"] = "AT_LEAST(" + std::to_string(p.precision) + ")";
            table.push_back(e);
        }
        j["l_table"] = table;
        if (l->l)
            j["l"] = *l->l;
        else
            j["l"] = "AT_LEAST(" + std::to_string(p.precision) + ")";
    }
    return j;
}

} // namespace

Json emit_result(const DesingProblem& p, const DesingResult& r) {
    Json j;
    switch (r.status) {
        case DesingStatus::Smooth: j["status"] = "smooth"; break;
        case DesingStatus::Localization: j["status"] = "localization"; break;
        case DesingStatus::NotWellChosen: j["status"] = "not-well-chosen"; break;
        case DesingStatus::NoSystem:
            j["status"] = "error";
            j["error_kind"] = "no-system";
            break;
    }
    if (!r.message.empty()) j["message"] = r.message;
    j["precision"] = p.precision;
    j["d_mode"] = dmode_str(p.d_mode);

    Json vars;
    vars["parameter"] = "x";
    Json us = Json::array();
    for (auto u : p.unknowns) us.push_back(p.table->name(u));
    vars["unknowns"] = us;
    Json aux = Json::array();
    if (r.presentation && r.presentation->kind == PresentationKind::Full)
        for (auto v : r.presentation->aux_vars) aux.push_back(r.presentation->out_table->name(v));
    vars["aux"] = aux;
    j["variables"] = vars;

    if (r.presentation) {
        const SmoothPresentation& pres = *r.presentation;
        Json rel = Json::array();
        for (const auto& g : pres.relations) rel.push_back(g.str());
        j["relations"] = rel;
        Json inv = Json::array();
        for (const auto& s : pres.inverted) inv.push_back(s.str());
        j["inverted"] = inv;
        Json pi;
        for (std::size_t i = 0; i < p.unknowns.size(); ++i)
            pi[p.table->name(p.unknowns[i])] = pres.substitution[i].str();
        j["pi"] = pi;
    }
    if (r.choice) j["certificate"] = emit_certificate(p, *r.choice, r.l_table);
    if (r.lift) {
        Json lift;
        Json ts = Json::array();
        for (const auto& t : r.lift->t_star)
            ts.push_back(poly_from_series(t, p.table).str());
        lift["t_star"] = ts;
        Json ro = Json::array();
        for (auto o : r.lift->residual_orders) {
            if (o == static_cast<std::size_t>(-1))
                ro.push_back(nullptr);
            else
                ro.push_back(o);
        }
        lift["residual_orders"] = ro;
        j["lift"] = lift;
    }
    return j;
}

Json emit_result(const SpecialProblem& p, const SpecialResult& r) {
    Json j;
    switch (r.status) {
        case DesingStatus::Smooth: j["status"] = "smooth"; break;
        case DesingStatus::Localization: j["status"] = "localization"; break;
        case DesingStatus::NotWellChosen: j["status"] = "bound-too-small"; break;
        case DesingStatus::NoSystem:
            j["status"] = "error";
            j["error_kind"] = "no-system";
            break;
    }
    if (!r.message.empty()) j["message"] = r.message;
    j["precision"] = p.precision;
    j["d_mode"] = dmode_str(p.d_mode);

    Json base;
    Json tv = Json::array();
    for (std::size_t v = 0; v < p.base.t_table->size(); ++v)
        tv.push_back(p.base.t_table->name(v));
    base["t_vars"] = tv;
    Json ar = Json::array();
    for (const auto& g : p.base.relations) ar.push_back(g.str());
    base["relations"] = ar;
    Json bs = Json::array();
    for (const auto& m : p.base.basis) bs.push_back(mon_str(*p.base.t_table, m));
    base["basis"] = bs;
    base["nil_index"] = p.base.nil_index;
    j["base"] = base;

    if (!r.presentation) return j;
    const SpecialPresentation& sp = *r.presentation;

    j["coefficient_vars"] = sp.flat.coeff_names;
    Json fl = Json::array();
    for (auto zi : sp.flat.chosen) fl.push_back(sp.flat.coeff_names[zi]);
    j["flattened_unknowns"] = fl;
    j["used_fallback_presentation"] = sp.flat.used_fallback;
    j["free_vars"] = sp.free_vars;

    Json brel = Json::array();
    for (const auto& g : sp.base_relations) brel.push_back(g.str());
    j["base_relations"] = brel;
    Json rel = Json::array();
    for (const auto& g : sp.relations) rel.push_back(g.str());
    j["relations"] = rel;
    Json inv = Json::array();
    for (const auto& s : sp.inverted) inv.push_back(s.str());
    j["inverted"] = inv;
    j["eta"] = sp.eta.str();
    Json pi;
    for (std::size_t i = 0; i < p.unknowns.size(); ++i)
        pi[p.ring->name(p.unknowns[i])] = sp.pi[i].str();
    j["pi"] = pi;
    j["inner"] = emit_result(sp.flat.problem, sp.inner);
    return j;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct Verifier {
    std::vector<VerifyCheck> checks;

    void run(const std::string& name, const std::function<void()>& fn) {
        VerifyCheck c;
        c.name = name;
        try {
            fn();
            c.ok = true;
        } catch (const Error& e) {
            c.ok = false;
            c.detail = e.what();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = e.what();
        }
        checks.push_back(std::move(c));
    }
};

void expect(bool cond, const std::string& msg) {
    if (!cond) fail(ErrorKind::Validation, msg);
}

SystemChoice parse_certificate(const Json& cert, const DesingProblem& p) {
    SystemChoice c;
    for (const auto& e : cert.at("f_indices")) c.f_indices.push_back(e.get<std::size_t>() - 1);
    c.r = cert.at("r").get<std::size_t>();
    c.L = parse_polynomial(cert.at("L").get<std::string>(), p.table);
    for (const auto& e : cert.at("minor_rows")) c.minor.rows.push_back(e.get<std::size_t>() - 1);
    for (const auto& e : cert.at("minor_cols")) c.minor.cols.push_back(e.get<std::size_t>() - 1);
    c.minor_value = parse_polynomial(cert.at("minor").get<std::string>(), p.table);
    c.P = parse_polynomial(cert.at("P").get<std::string>(), p.table);
    c.c = cert.at("c").get<std::size_t>();
    c.d = parse_polynomial(cert.at("d").get<std::string>(), p.table);
    c.e = parse_polynomial(cert.at("e").get<std::string>(), p.table);
    for (const auto& e : cert.at("permutation")) c.permutation.push_back(e.get<std::size_t>() - 1);
    return c;
}

void verify_dvr(Verifier& V, const DesingProblem& p, const Json& res);

void verify_dvr_smooth(Verifier& V, const DesingProblem& p, const Json& res) {
    std::size_t n = p.unknowns.size();
    SystemChoice cert = parse_certificate(res.at("certificate"), p);
    std::size_t r = cert.r;

    // rebuild the output ring [x, Y..., T...]
    std::vector<std::string> names = p.table->names();
    std::vector<VarRole> roles;
    for (std::size_t i = 0; i < p.table->size(); ++i) roles.push_back(p.table->role(i));
    std::vector<std::string> aux_names;
    for (const auto& a : res.at("variables").at("aux")) {
        aux_names.push_back(a.get<std::string>());
        names.push_back(aux_names.back());
        roles.push_back(VarRole::Aux);
    }
    VarTablePtr ext = make_table(names, roles);
    std::vector<std::size_t> aux_vars;
    for (const auto& a : aux_names) aux_vars.push_back(ext->index(a));
    expect(aux_vars.size() == n, "expected one auxiliary variable per unknown");

    std::vector<Polynomial> g;
    for (const auto& s : res.at("relations")) g.push_back(parse_polynomial(s.get<std::string>(), ext));
    expect(g.size() == r, "expected r relations");
    std::vector<Polynomial> inverted;
    for (const auto& s : res.at("inverted")) inverted.push_back(parse_polynomial(s.get<std::string>(), ext));
    expect(inverted.size() == 2, "expected the two inverted elements");
    std::vector<Polynomial> b;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string key = p.table->name(p.unknowns[i]);
        b.push_back(parse_polynomial(res.at("pi").at(key).get<std::string>(), ext));
    }

    auto lift = [&](const Polynomial& q) {
        std::vector<std::size_t> mp(p.table->size());
        for (std::size_t i = 0; i < mp.size(); ++i) mp[i] = ext->index(p.table->name(i));
        return remap(q, ext, mp);
    };
    auto images = [&] {
        std::map<std::size_t, Polynomial> m;
        for (std::size_t i = 0; i < n; ++i) m.emplace(p.unknowns[i], p.point[i]);
        return m;
    }();

    V.run("membership: L*I lies in (f)", [&] {
        std::vector<Polynomial> fsub;
        for (auto i : cert.f_indices) {
            expect(i < p.ideal_gens.size(), "certificate f index out of range");
            fsub.push_back(p.ideal_gens[i]);
        }
        GroebnerBasis G = buchberger(Ideal(p.table, fsub));
        for (const auto& gen : p.ideal_gens)
            expect(normal_form(cert.L * gen, G).is_zero(), "L*g is not in (f) for some generator");
    });

    V.run("certificate orders: c = ord(L(y')M(y')) = ord(d), d*e = P(y')", [&] {
        Polynomial LM = cert.L * cert.minor_value;
        XOrder o = x_order(substitute(LM, images));
        expect(!o.infinite && o.value == cert.c, "ord(L(y')M(y')) differs from c");
        expect(x_order(cert.d) == XOrder::at(cert.c), "ord(d) differs from c");
        Polynomial Pval = substitute(cert.P, images);
        expect(cert.d * cert.e == Pval, "d*e does not equal P(y')");
        expect(2 * cert.c + 1 <= p.precision, "2c+1 exceeds the precision");
        expect(!rat_is_zero(cert.e.constant_coeff()), "e is not a unit");
    });

    V.run("layout: P = L*det(H) with the recorded permutation", [&] {
        std::vector<Polynomial> fsub;
        for (auto i : cert.f_indices) fsub.push_back(p.ideal_gens[i]);
        PolyMatrix J = jacobian(fsub, p.unknowns, p.table);
        std::vector<std::size_t> allc(n);
        for (std::size_t i = 0; i < n; ++i) allc[i] = i;
        std::vector<std::size_t> layout;
        PolyMatrix H = border(J.submatrix(cert.minor.rows, allc), cert.minor.cols, &layout);
        expect(layout == cert.permutation, "recorded permutation differs from the layout");
        expect(cert.L * determinant(H) == cert.P, "P does not equal L*det(H)");
        Polynomial M = determinant(J.submatrix(cert.minor.rows, cert.minor.cols));
        expect(M == cert.minor_value || M == -cert.minor_value,
               "minor value differs from the recorded one");
    });

    Polynomial d_ext = lift(cert.d);
    Polynomial e_ext = lift(cert.e);
    Polynomial d2 = d_ext * d_ext;

    V.run("identity: f(b) = d^2 g for every selected generator", [&] {
        for (std::size_t i = 0; i < r; ++i) {
            std::map<std::size_t, Polynomial> to_b;
            for (std::size_t k = 0; k < n; ++k) to_b.emplace(p.unknowns[k], b[k]);
            Polynomial fb = substitute(lift(p.ideal_gens[cert.f_indices[i]]), to_b);
            expect(fb == d2 * g[i], "f_i(b) differs from d^2 g_i");
        }
    });

    std::vector<Polynomial> a_parts, q_parts;
    {
        std::map<std::size_t, Polynomial> tzero;
        for (auto v : aux_vars) tzero.emplace(v, Polynomial::zero(ext));
        for (std::size_t i = 0; i < r; ++i) {
            Polynomial a = substitute(g[i], tzero);
            Polynomial q = g[i] - a - e_ext * Polynomial::variable(ext, aux_vars[i]);
            a_parts.push_back(std::move(a));
            q_parts.push_back(std::move(q));
        }
    }
    V.run("shape: g = a + e*T_i + Q with a in x*Q[x] and Q in (T)^2", [&] {
        for (std::size_t i = 0; i < r; ++i) {
            XOrder oa = x_content_order(a_parts[i]);
            expect(oa.infinite || oa.value >= 1, "constant part a is not in x*Q[x]");
            for (const auto& t : q_parts[i].terms()) {
                std::uint64_t deg = 0;
                for (auto v : aux_vars) deg += t.mon.exps[v];
                expect(deg >= 2, "Q has a term of degree below 2 in T");
            }
        }
    });

    V.run("units: s(0) = e^r, s'(0) = e, d*s' = P(b)", [&] {
        std::map<std::size_t, Polynomial> tzero;
        for (auto v : aux_vars) tzero.emplace(v, Polynomial::zero(ext));
        expect(substitute(inverted[0], tzero) == lift(cert.e).pow(r), "s(T=0) is not e^r");
        expect(substitute(inverted[1], tzero) == e_ext, "s'(T=0) is not e");
        std::map<std::size_t, Polynomial> to_b;
        for (std::size_t k = 0; k < n; ++k) to_b.emplace(p.unknowns[k], b[k]);
        expect(d_ext * inverted[1] == substitute(lift(cert.P), to_b), "d*s' differs from P(b)");
    });

    V.run("s is the leading r x r minor of dg/dT", [&] {
        PolyMatrix dgdT = jacobian(g, aux_vars, ext);
        std::vector<std::size_t> firstr;
        for (std::size_t i = 0; i < r; ++i) firstr.push_back(i);
        expect(determinant(dgdT.submatrix(firstr, firstr)) == inverted[0],
               "s differs from the leading minor of dg/dT");
    });

    V.run("l-table matches a recomputation", [&] {
        LInvariantReport rep = l_invariant(p, cert.f_indices);
        const Json& table = res.at("certificate").at("l_table");
        expect(table.size() == rep.table.size(), "l-table size differs");
        for (std::size_t i = 0; i < rep.table.size(); ++i) {
            const Json& ent = table[i];
            if (rep.table[i].order)
                expect(ent.at("order").is_number_unsigned() &&
                           ent.at("order").get<std::size_t>() == *rep.table[i].order,
                       "l-table order differs");
            else
                expect(ent.at("order").is_string(), "l-table order should be AT_LEAST");
        }
    });

    V.run("lift: residual orders at least N + 2c", [&] {
        SmoothPresentation pres;
        pres.kind = PresentationKind::Full;
        pres.precision = p.precision;
        pres.out_table = ext;
        pres.aux_vars = aux_vars;
        pres.relations = g;
        pres.inverted = inverted;
        pres.substitution = b;
        pres.certificate = cert;
        pres.a_parts = a_parts;
        pres.q_parts = q_parts;
        LiftResult lr = lift_point(p, pres);
        for (std::size_t k = 0; k < r; ++k) {
            SeriesOrder so = series_order(lr.t_star[k]);
            expect(so.at_least || so.value >= 1, "t* is not congruent to 0 mod x");
        }
        for (auto o : lr.residual_orders)
            expect(o == static_cast<std::size_t>(-1) || o >= p.precision + 2 * cert.c,
                   "residual order below N + 2c");
    });
}

void verify_dvr_localization(Verifier& V, const DesingProblem& p, const Json& res) {
    SystemChoice cert = parse_certificate(res.at("certificate"), p);
    auto images = [&] {
        std::map<std::size_t, Polynomial> m;
        for (std::size_t i = 0; i < p.unknowns.size(); ++i) m.emplace(p.unknowns[i], p.point[i]);
        return m;
    }();

    V.run("membership: L*I lies in (f)", [&] {
        std::vector<Polynomial> fsub;
        for (auto i : cert.f_indices) fsub.push_back(p.ideal_gens[i]);
        GroebnerBasis G = buchberger(Ideal(p.table, fsub));
        for (const auto& gen : p.ideal_gens)
            expect(normal_form(cert.L * gen, G).is_zero(), "L*g is not in (f) for some generator");
    });

    V.run("c = 0 and P(y') is a unit", [&] {
        expect(cert.c == 0, "localization with nonzero c");
        expect(cert.P == cert.L * cert.minor_value, "P differs from L*M");
        XOrder o = x_order(substitute(cert.P, images));
        expect(!o.infinite && o.value == 0, "P(y') is not a unit");
    });

    V.run("relations are the original ideal; inverted = {P}", [&] {
        const Json& rel = res.at("relations");
        expect(rel.size() == p.ideal_gens.size(), "relation count differs from the ideal");
        for (std::size_t i = 0; i < p.ideal_gens.size(); ++i)
            expect(parse_polynomial(rel[i].get<std::string>(), p.table) == p.ideal_gens[i],
                   "relation differs from the ideal generator");
        const Json& inv = res.at("inverted");
        expect(inv.size() == 1, "expected a single inverted element");
        expect(parse_polynomial(inv[0].get<std::string>(), p.table) == cert.P,
               "inverted element differs from P");
    });
}

void verify_dvr(Verifier& V, const DesingProblem& p, const Json& res) {
    std::string status = res.at("status").get<std::string>();
    if (status == "smooth") {
        verify_dvr_smooth(V, p, res);
    } else if (status == "localization") {
        verify_dvr_localization(V, p, res);
    } else if (status == "not-well-chosen") {
        V.run("failure branch: 2c+1 > N at the recorded choice", [&] {
            SystemChoice cert = parse_certificate(res.at("certificate"), p);
            expect(2 * cert.c + 1 > p.precision, "2c+1 does not exceed N");
            std::map<std::size_t, Polynomial> images;
            for (std::size_t i = 0; i < p.unknowns.size(); ++i)
                images.emplace(p.unknowns[i], p.point[i]);
            XOrder o = x_order(substitute(cert.L * cert.minor_value, images));
            expect(!o.infinite && o.value == cert.c, "recorded c differs from ord(L(y')M(y'))");
        });
    } else {
        V.run("status", [&] { fail(ErrorKind::Validation, "unverifiable status: " + status); });
    }
}

void verify_special(Verifier& V, const SpecialProblem& sp, const Json& res) {
    std::string status = res.at("status").get<std::string>();
    if (status == "bound-too-small") {
        V.run("failure branch: inner run reports not-well-chosen", [&] {
            Flattened flat = flatten(sp);
            DesingResult inner = desingularize(flat.problem);
            expect(inner.status == DesingStatus::NotWellChosen,
                   "inner run does not report not-well-chosen");
        });
        return;
    }

    Flattened flat = flatten(sp);

    V.run("base: basis and nil index match a recomputation", [&] {
        const Json& base = res.at("base");
        expect(base.at("nil_index").get<std::size_t>() == sp.base.nil_index, "nil index differs");
        const Json& bs = base.at("basis");
        expect(bs.size() == sp.base.basis.size(), "basis size differs");
        for (std::size_t i = 0; i < sp.base.basis.size(); ++i)
            expect(bs[i].get<std::string>() == mon_str(*sp.base.t_table, sp.base.basis[i]),
                   "basis monomial differs");
    });

    V.run("factorization: original relations vanish on the table mod x^N", [&] {
        std::vector<std::string> names{"x"};
        std::vector<VarRole> roles{VarRole::Parameter};
        for (const auto& nm : flat.coeff_names) {
            names.push_back(nm);
            roles.push_back(VarRole::Unknown);
        }
        VarTablePtr coeff_table = make_table(std::move(names), std::move(roles));
        expand_relations(sp, coeff_table, flat.coeff_names); // throws on violation
    });

    V.run("inner result verifies against the flattened problem", [&] {
        Verifier inner;
        verify_dvr(inner, flat.problem, res.at("inner"));
        for (const auto& c : inner.checks)
            if (!c.ok) fail(ErrorKind::Validation, "inner check failed: " + c.name + " (" + c.detail + ")");
    });

    V.run("descend: relations repeat the inner ones verbatim (eta = 1)", [&] {
        expect(res.at("eta").get<std::string>() == "1", "eta differs from 1");
        const Json& inner_rel = res.at("inner").at("relations");
        const Json& rel = res.at("relations");
        expect(rel.size() == inner_rel.size(), "relation count differs from the inner run");
        for (std::size_t i = 0; i < rel.size(); ++i)
            expect(rel[i].get<std::string>() == inner_rel[i].get<std::string>(),
                   "relation differs from the inner one");
        const Json& brel = res.at("base_relations");
        expect(brel.size() == sp.base.relations.size(), "base relation count differs");
    });

    V.run("pi: images reassemble the coefficient decomposition", [&] {
        // reassemble pi from the verified inner images; the free coefficient
        // variables enter with their own names
        const Json& inner = res.at("inner");
        std::vector<std::string> names;
        std::vector<VarRole> roles;
        for (std::size_t v = 0; v < sp.base.t_table->size(); ++v) {
            names.push_back(sp.base.t_table->name(v));
            roles.push_back(VarRole::Nilpotent);
        }
        names.push_back("x");
        roles.push_back(VarRole::Parameter);
        for (auto zi : flat.chosen) {
            names.push_back(flat.coeff_names[zi]);
            roles.push_back(VarRole::Unknown);
        }
        for (const auto& a : inner.at("variables").at("aux")) {
            names.push_back(a.get<std::string>());
            roles.push_back(VarRole::Aux);
        }
        for (auto zi : flat.leftover) {
            names.push_back(flat.coeff_names[zi]);
            roles.push_back(VarRole::Unknown);
        }
        VarTablePtr big = make_table(names, roles);

        std::map<std::size_t, std::size_t> chosen_pos;
        for (std::size_t k = 0; k < flat.chosen.size(); ++k)
            chosen_pos.emplace(flat.chosen[k], k);
        for (std::size_t i = 0; i < sp.unknowns.size(); ++i) {
            Polynomial img(big);
            for (std::size_t zi = 0; zi < flat.coeff_names.size(); ++zi) {
                if (flat.coeff_keys[zi].first != i) continue;
                std::size_t b = flat.coeff_keys[zi].second;
                Monomial mm(big->size());
                for (std::size_t v = 0; v < sp.base.t_table->size(); ++v)
                    mm.exps[big->index(sp.base.t_table->name(v))] = sp.base.basis[b].exps[v];
                Polynomial tmon = Polynomial::term(big, mm, Rat(1));
                Polynomial zimg(big);
                auto it = chosen_pos.find(zi);
                if (it != chosen_pos.end()) {
                    const std::string key = flat.problem.table->name(flat.problem.unknowns[it->second]);
                    zimg = parse_polynomial(inner.at("pi").at(key).get<std::string>(), big);
                } else {
                    zimg = Polynomial::variable(big, big->index(flat.coeff_names[zi]));
                }
                img += tmon * zimg;
            }
            const std::string ukey = sp.ring->name(sp.unknowns[i]);
            Polynomial claimed = parse_polynomial(res.at("pi").at(ukey).get<std::string>(), big);
            expect(claimed == img, "pi differs from the reassembled images");
        }
    });
}

} // namespace

std::vector<VerifyCheck> verify_result(const ProblemFile& pf, const Json& result) {
    Verifier V;
    try {
        if (pf.artinian) {
            SpecialProblem sp = build_special(pf);
            verify_special(V, sp, result);
        } else {
            DesingProblem p = build_dvr(pf);
            verify_dvr(V, p, result);
        }
    } catch (const std::exception& e) {
        V.checks.push_back({"setup", false, e.what()});
    }
    return V.checks;
}

// ---------------------------------------------------------------------------
// CLI
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Validation, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const Json& j) {
    std::string text = j.dump(2);
    text += "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(ErrorKind::Validation, "cannot open " + path + " for writing");
        out << text;
    }
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void apply_cli_hints(ProblemFile& pf, const std::string& hint_f, const std::string& hint_L,
                     const std::string& hint_minor) {
    if (!hint_f.empty()) {
        std::vector<std::size_t> f;
        for (const auto& tok : split_list(hint_f, ',')) f.push_back(std::stoul(tok));
        pf.hint_f = std::move(f);
    }
    if (!hint_L.empty()) pf.hint_L = hint_L;
    if (!hint_minor.empty()) {
        auto parts = split_list(hint_minor, ':');
        if (parts.size() != 2)
            fail(ErrorKind::Validation, "--hint-minor expects rows:cols, e.g. 1,2:2,4");
        pf.hint_minor_rows = split_list(parts[0], ',');
        pf.hint_minor_cols = split_list(parts[1], ',');
    }
}

std::optional<DMode> dmode_from(const std::string& flag) {
    if (!flag.empty()) return parse_dmode(flag);
    if (const char* env = std::getenv("NERON_D_MODE"); env && *env) return parse_dmode(env);
    return std::nullopt;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"exact construction of smooth factorizations over k[x]_(x) and Artinian bases"};
    app.require_subcommand(1);

    std::string input, output, result_path, d_mode_flag, hint_f, hint_L, hint_minor;

    auto add_common = [&](CLI::App* cmd, bool with_hints) {
        cmd->add_option("--input", input, "problem file (JSON)")->required();
        cmd->add_option("--output", output, "result file (default: stdout)");
        if (with_hints) {
            cmd->add_option("--d-mode", d_mode_flag, "normalized | exact");
            cmd->add_option("--hint-f", hint_f, "1-based generator indices, e.g. 1,2");
            cmd->add_option("--hint-L", hint_L, "explicit colon witness, e.g. Y2^3");
            cmd->add_option("--hint-minor", hint_minor, "rows:cols, e.g. 1,2:2,4");
        }
    };

    CLI::App* desing1 = app.add_subcommand("desing1", "desingularize over the base k[x]_(x)");
    add_common(desing1, true);
    CLI::App* special = app.add_subcommand("special", "desingularize over an Artinian base");
    add_common(special, true);
    CLI::App* linv = app.add_subcommand("linv", "print the minor/valuation table");
    add_common(linv, true);
    CLI::App* verify = app.add_subcommand("verify", "re-check a result file");
    verify->add_option("--input", input, "problem file (JSON)")->required();
    verify->add_option("--result", result_path, "result file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (desing1->parsed()) {
            ProblemFile pf = parse_problem(read_file(input));
            apply_cli_hints(pf, hint_f, hint_L, hint_minor);
            DesingProblem p = build_dvr(pf, dmode_from(d_mode_flag));
            DesingResult r = desingularize(p);
            write_output(output, emit_result(p, r));
            if (r.status == DesingStatus::NotWellChosen) return 2;
            if (r.status == DesingStatus::NoSystem) return 1;
            return 0;
        }
        if (special->parsed()) {
            ProblemFile pf = parse_problem(read_file(input));
            apply_cli_hints(pf, hint_f, hint_L, hint_minor);
            SpecialProblem p = build_special(pf, dmode_from(d_mode_flag));
            SpecialResult r = special_desingularization(p);
            write_output(output, emit_result(p, r));
            if (r.status == DesingStatus::NotWellChosen) return 2; // bound too small
            if (r.status == DesingStatus::NoSystem) return 1;
            return 0;
        }
        if (linv->parsed()) {
            ProblemFile pf = parse_problem(read_file(input));
            apply_cli_hints(pf, hint_f, hint_L, hint_minor);
            DesingProblem p;
            if (pf.artinian) {
                SpecialProblem sp = build_special(pf, dmode_from(d_mode_flag));
                p = flatten(sp).problem;
            } else {
                p = build_dvr(pf, dmode_from(d_mode_flag));
            }
            std::vector<std::size_t> f_indices;
            if (p.hints.f_indices) {
                f_indices = *p.hints.f_indices;
            } else {
                for (std::size_t i = 0; i < p.ideal_gens.size(); ++i) f_indices.push_back(i);
            }
            LInvariantReport rep = l_invariant(p, f_indices);
            std::cout << "r = " << rep.r << ", N = " << p.precision << "\n";
            for (const auto& ent : rep.table) {
                std::cout << "minor rows={";
                for (std::size_t k = 0; k < ent.position.rows.size(); ++k)
                    std::cout << (k ? "," : "") << ent.position.rows[k] + 1;
                std::cout << "} cols={";
                for (std::size_t k = 0; k < ent.position.cols.size(); ++k)
                    std::cout << (k ? "," : "") << ent.position.cols[k] + 1;
                std::cout << "}: " << ent.minor.str() << "  order ";
                if (ent.order)
                    std::cout << *ent.order;
                else
                    std::cout << ">= " << p.precision;
                std::cout << "\n";
            }
            std::cout << "l = ";
            if (rep.l)
                std::cout << *rep.l;
            else
                std::cout << ">= " << p.precision;
            std::cout << "\n";
            return 0;
        }
        if (verify->parsed()) {
            ProblemFile pf = parse_problem(read_file(input));
            Json res;
            try {
                res = Json::parse(read_file(result_path));
            } catch (const std::exception& ex) {
                fail(ErrorKind::ParseError, std::string("result file: ") + ex.what());
            }
            auto checks = verify_result(pf, res);
            bool all = true;
            for (const auto& c : checks) {
                std::cout << "check " << c.name << ": " << (c.ok ? "ok" : "FAIL");
                if (!c.ok) std::cout << " (" << c.detail << ")";
                std::cout << "\n";
                all = all && c.ok;
            }
            std::cout << (all ? "verify: all checks passed" : "verify: FAILURES") << "\n";
            return all ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << Error::kind_name(e.kind()) << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace neron
