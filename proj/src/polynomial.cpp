#include "neron/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace neron {

Polynomial Polynomial::constant(const VarTablePtr& t, const Rat& c, MonomialOrder order) {
    Polynomial p(t, order);
    if (!rat_is_zero(c)) p.terms_.push_back({Monomial(t->size()), c});
    return p;
}

Polynomial Polynomial::variable(const VarTablePtr& t, std::size_t var, std::uint32_t exp,
                                MonomialOrder order) {
    if (var >= t->size()) fail(ErrorKind::UnknownVariable, "variable index out of range");
    Polynomial p(t, order);
    if (exp == 0) return constant(t, 1, order);
    Monomial m(t->size());
    m.exps[var] = exp;
    p.terms_.push_back({std::move(m), Rat(1)});
    return p;
}

Polynomial Polynomial::term(const VarTablePtr& t, Monomial m, Rat c, MonomialOrder order) {
    if (m.size() != t->size()) fail(ErrorKind::Internal, "monomial width mismatch");
    Polynomial p(t, order);
    if (!rat_is_zero(c)) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
}

Polynomial Polynomial::from_terms(const VarTablePtr& t, std::vector<Term> terms,
                                  MonomialOrder order) {
    std::unordered_map<Monomial, Rat, MonomialHash> acc;
    for (auto& tm : terms) {
        if (tm.mon.size() != t->size()) fail(ErrorKind::Internal, "monomial width mismatch");
        acc[tm.mon] += tm.coeff;
    }
    Polynomial p(t, order);
    p.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!rat_is_zero(c)) p.terms_.push_back({m, c});
    p.sort_terms();
    return p;
}

void Polynomial::sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [this](const Term& a, const Term& b) { return order_.greater(a.mon, b.mon); });
}

Rat Polynomial::constant_coeff() const {
    for (const auto& t : terms_)
        if (t.mon.is_one()) return t.coeff;
    return Rat(0);
}

std::uint64_t Polynomial::total_degree() const {
    std::uint64_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mon.total_degree());
    return d;
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mon.exps[var]);
    return d;
}

Polynomial Polynomial::with_order(MonomialOrder order) const {
    if (order == order_) return *this;
    Polynomial p(table_, order);
    p.terms_ = terms_;
    p.sort_terms();
    return p;
}

Polynomial Polynomial::operator-() const {
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

// Merge of two sorted term lists; sign = +1 for add, -1 for sub.
Polynomial poly_add_impl(const Polynomial& a, const Polynomial& b, int sign) {
    require_same_table(a.table_, b.table_);
    const Polynomial& bb = b.order() == a.order() ? b : b.with_order(a.order());
    Polynomial r(a.table_, a.order_);
    r.terms_.reserve(a.terms_.size() + bb.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < bb.terms_.size()) {
        int c = a.order_.compare(a.terms_[i].mon, bb.terms_[j].mon);
        if (c > 0) {
            r.terms_.push_back(a.terms_[i++]);
        } else if (c < 0) {
            Term t = bb.terms_[j++];
            if (sign < 0) t.coeff = -t.coeff;
            r.terms_.push_back(std::move(t));
        } else {
            Rat s = a.terms_[i].coeff;
            if (sign > 0)
                s += bb.terms_[j].coeff;
            else
                s -= bb.terms_[j].coeff;
            if (!rat_is_zero(s)) r.terms_.push_back({a.terms_[i].mon, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < bb.terms_.size(); ++j) {
        Term t = bb.terms_[j];
        if (sign < 0) t.coeff = -t.coeff;
        r.terms_.push_back(std::move(t));
    }
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const { return poly_add_impl(*this, o, +1); }
Polynomial Polynomial::operator-(const Polynomial& o) const { return poly_add_impl(*this, o, -1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require_same_table(table_, o.table_);
    std::unordered_map<Monomial, Rat, MonomialHash> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    for (const auto& ta : terms_)
        for (const auto& tb : o.terms_) acc[mon_mul(ta.mon, tb.mon)] += ta.coeff * tb.coeff;
    Polynomial r(table_, order_);
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!rat_is_zero(c)) r.terms_.push_back({m, c});
    r.sort_terms();
    return r;
}

Polynomial Polynomial::scaled(const Rat& c) const {
    if (rat_is_zero(c)) return Polynomial(table_, order_);
    Polynomial p = *this;
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

Polynomial Polynomial::mul_term(const Monomial& m, const Rat& c) const {
    if (rat_is_zero(c)) return Polynomial(table_, order_);
    Polynomial p = *this;
    for (auto& t : p.terms_) {
        t.mon = mon_mul(t.mon, m);
        t.coeff *= c;
    }
    // multiplying by a monomial preserves relative order
    return p;
}

Polynomial Polynomial::pow(std::uint64_t e) const {
    Polynomial r = constant(table_, 1, order_);
    Polynomial base = *this;
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    if (!same_table(table_, o.table_)) return false;
    const Polynomial& oo = o.order() == order_ ? o : o.with_order(order_);
    if (terms_.size() != oo.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mon == oo.terms_[i].mon) || terms_[i].coeff != oo.terms_[i].coeff)
            return false;
    return true;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    Rat inv = 1 / leading_term().coeff;
    return scaled(inv);
}

Polynomial Polynomial::primitive() const {
    if (is_zero()) return *this;
    // lcm of denominators, then gcd of numerators
    mpz_class den(1), num(0);
    for (const auto& t : terms_) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den().get_mpz_t());
    }
    for (const auto& t : terms_) {
        mpz_class n = t.coeff.get_num() * (den / t.coeff.get_den());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
    }
    Rat scale(den, num);
    scale.canonicalize();
    if (sgn(leading_term().coeff) < 0) scale = -scale;
    return scaled(scale);
}

Polynomial differentiate(const Polynomial& p, std::size_t var) {
    if (var >= p.table()->size()) fail(ErrorKind::UnknownVariable, "variable index out of range");
    std::vector<Term> out;
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        std::uint32_t e = t.mon.exps[var];
        if (e == 0) continue;
        Term d;
        d.mon = t.mon;
        d.mon.exps[var] = e - 1;
        d.coeff = t.coeff * e;
        out.push_back(std::move(d));
    }
    return Polynomial::from_terms(p.table(), std::move(out), p.order());
}

Polynomial differentiate(const Polynomial& p, const std::string& var) {
    return differentiate(p, p.table()->index(var));
}

Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& images) {
    const auto& vt = p.table();
    for (const auto& [v, img] : images) {
        if (v >= vt->size()) fail(ErrorKind::UnknownVariable, "substitution of unknown variable");
        require_same_table(vt, img.table());
    }
    // memoized powers of each image
    std::map<std::size_t, std::vector<Polynomial>> powers;
    auto power_of = [&](std::size_t v, std::uint32_t e) -> const Polynomial& {
        auto& vec = powers[v];
        if (vec.empty()) vec.push_back(Polynomial::constant(vt, 1, p.order()));
        while (vec.size() <= e) vec.push_back(vec.back() * images.at(v));
        return vec[e];
    };
    Polynomial acc(vt, p.order());
    for (const auto& t : p.terms()) {
        Monomial kept(vt->size());
        Polynomial factor = Polynomial::constant(vt, t.coeff, p.order());
        for (std::size_t v = 0; v < vt->size(); ++v) {
            std::uint32_t e = t.mon.exps[v];
            if (!e) continue;
            if (images.count(v))
                factor = factor * power_of(v, e);
            else
                kept.exps[v] = e;
        }
        acc += factor.mul_term(kept, Rat(1));
    }
    return acc;
}

XOrder x_order(const Polynomial& p) {
    const auto& vt = p.table();
    std::size_t xi = vt->parameter_index();
    if (xi == VarTable::npos)
        fail(ErrorKind::UnknownVariable, "table has no base parameter");
    XOrder best = XOrder::inf();
    for (const auto& t : p.terms()) {
        for (std::size_t v = 0; v < vt->size(); ++v)
            if (v != xi && t.mon.exps[v] != 0)
                fail(ErrorKind::Validation,
                     "x_order: polynomial involves non-parameter variable " + vt->name(v));
        if (best.infinite || t.mon.exps[xi] < best.value) best = XOrder::at(t.mon.exps[xi]);
    }
    return best;
}

XOrder x_content_order(const Polynomial& p) {
    const auto& vt = p.table();
    std::size_t xi = vt->parameter_index();
    if (xi == VarTable::npos)
        fail(ErrorKind::UnknownVariable, "table has no base parameter");
    XOrder best = XOrder::inf();
    for (const auto& t : p.terms())
        if (best.infinite || t.mon.exps[xi] < best.value) best = XOrder::at(t.mon.exps[xi]);
    return best;
}

Polynomial exact_divide(const Polynomial& p, const Polynomial& q) {
    require_same_table(p.table(), q.table());
    if (q.is_zero()) fail(ErrorKind::Internal, "exact division by zero");
    if (q.terms().size() == 1) {
        // termwise fast path for monomial divisors
        const Term& qt = q.leading_term();
        std::vector<Term> out;
        out.reserve(p.terms().size());
        for (const auto& t : p.terms()) {
            if (!mon_divides(qt.mon, t.mon))
                fail(ErrorKind::Internal, "exact division failed (not a multiple)");
            out.push_back({mon_div(t.mon, qt.mon), t.coeff / qt.coeff});
        }
        return Polynomial::from_terms(p.table(), std::move(out), p.order());
    }
    Polynomial rem = p.with_order(q.order());
    Polynomial quot(p.table(), q.order());
    const Term& qlt = q.leading_term();
    while (!rem.is_zero()) {
        const Term& rlt = rem.leading_term();
        if (!mon_divides(qlt.mon, rlt.mon))
            fail(ErrorKind::Internal, "exact division failed (not a multiple)");
        Monomial m = mon_div(rlt.mon, qlt.mon);
        Rat c = rlt.coeff / qlt.coeff;
        quot += Polynomial::term(p.table(), m, c, q.order());
        rem -= q.mul_term(m, c);
    }
    return quot.with_order(p.order());
}

Polynomial remap(const Polynomial& p, const VarTablePtr& to, const std::vector<std::size_t>& map,
                 std::optional<MonomialOrder> order) {
    if (map.size() != p.table()->size())
        fail(ErrorKind::Internal, "remap: map size mismatch");
    MonomialOrder ord = order.value_or(p.order());
    std::vector<Term> out;
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        Monomial m(to->size());
        for (std::size_t v = 0; v < map.size(); ++v) {
            if (t.mon.exps[v] == 0) continue;
            if (map[v] == VarTable::npos)
                fail(ErrorKind::UnknownVariable,
                     "remap: variable " + p.table()->name(v) + " has no image");
            m.exps[map[v]] += t.mon.exps[v];
        }
        out.push_back({std::move(m), t.coeff});
    }
    return Polynomial::from_terms(to, std::move(out), ord);
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        bool neg = sgn(c) < 0;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (neg) c = -c;
        bool printed = false;
        if (c != 1 || t.mon.is_one()) {
            os << rat_str(c);
            printed = true;
        }
        for (std::size_t v = 0; v < table_->size(); ++v) {
            std::uint32_t e = t.mon.exps[v];
            if (!e) continue;
            if (printed) os << "*";
            os << table_->name(v);
            if (e > 1) os << "^" << e;
            printed = true;
        }
    }
    return os.str();
}

} // namespace neron
