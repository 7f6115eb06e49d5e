#include "neron/series.hpp"

#include <algorithm>
#include <sstream>

namespace neron {

static std::size_t joint_precision(const TruncatedSeries& a, const TruncatedSeries& b) {
    return std::min(a.precision(), b.precision());
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) {
    std::size_t n = joint_precision(a, b);
    TruncatedSeries r(n);
    for (std::size_t i = 0; i < n; ++i) r.at(i) = a[i] + b[i];
    return r;
}

TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    std::size_t n = joint_precision(a, b);
    TruncatedSeries r(n);
    for (std::size_t i = 0; i < n; ++i) r.at(i) = a[i] - b[i];
    return r;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    std::size_t n = joint_precision(a, b);
    TruncatedSeries r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rat_is_zero(a[i])) continue;
        for (std::size_t j = 0; i + j < n; ++j) {
            if (rat_is_zero(b[j])) continue;
            r.at(i + j) += a[i] * b[j];
        }
    }
    return r;
}

TruncatedSeries series_scale(const TruncatedSeries& a, const Rat& c) {
    TruncatedSeries r(a.precision());
    for (std::size_t i = 0; i < a.precision(); ++i) r.at(i) = a[i] * c;
    return r;
}

TruncatedSeries series_shift(const TruncatedSeries& a, std::size_t k) {
    TruncatedSeries r(a.precision());
    for (std::size_t i = 0; i + k < a.precision(); ++i) r.at(i + k) = a[i];
    return r;
}

TruncatedSeries series_inverse(const TruncatedSeries& a) {
    if (rat_is_zero(a[0]))
        fail(ErrorKind::NonUnit, "series_inverse: constant coefficient is zero");
    std::size_t n = a.precision();
    // b <- b*(2 - a*b), doubling the known precision each step
    TruncatedSeries b(1, {Rat(1) / a[0]});
    std::size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        TruncatedSeries ak = a.truncated(k);
        TruncatedSeries bk = b.truncated(k);
        TruncatedSeries ab = series_mul(ak, bk);
        TruncatedSeries two_minus(k);
        two_minus.at(0) = 2;
        b = series_mul(bk, series_sub(two_minus, ab));
    }
    return b;
}

TruncatedSeries series_sqrt(const TruncatedSeries& a) {
    if (a[0] != 1)
        fail(ErrorKind::NonUnit, "series_sqrt: constant coefficient must be 1");
    std::size_t n = a.precision();
    // s <- (s + a/s)/2, doubling the known precision each step
    TruncatedSeries s(1, {Rat(1)});
    std::size_t k = 1;
    while (k < n) {
        k = std::min(2 * k, n);
        TruncatedSeries ak = a.truncated(k);
        TruncatedSeries sk = s.truncated(k);
        TruncatedSeries q = series_mul(ak, series_inverse(sk));
        s = series_scale(series_add(sk, q), Rat(1, 2));
    }
    return s;
}

SeriesOrder series_order(const TruncatedSeries& a) {
    for (std::size_t i = 0; i < a.precision(); ++i)
        if (!rat_is_zero(a[i])) return SeriesOrder::exact(i);
    return SeriesOrder::bound(a.precision());
}

TruncatedSeries series_exp(std::size_t precision) {
    TruncatedSeries r(precision);
    Rat c(1);
    for (std::size_t i = 0; i < precision; ++i) {
        r.at(i) = c;
        c /= static_cast<long>(i + 1);
    }
    return r;
}

TruncatedSeries series_fact(std::size_t precision) {
    TruncatedSeries r(precision);
    Rat c(1);
    for (std::size_t i = 0; i < precision; ++i) {
        r.at(i) = c;
        c *= static_cast<long>(i + 1);
    }
    return r;
}

TruncatedSeries series_from_poly(const Polynomial& p, std::size_t precision) {
    std::size_t xi = p.table()->parameter_index();
    if (xi == VarTable::npos)
        fail(ErrorKind::UnknownVariable, "series_from_poly: table has no base parameter");
    TruncatedSeries r(precision);
    for (const auto& t : p.terms()) {
        for (std::size_t v = 0; v < p.table()->size(); ++v)
            if (v != xi && t.mon.exps[v] != 0)
                fail(ErrorKind::Validation, "series_from_poly: polynomial not univariate in x");
        if (t.mon.exps[xi] < precision) r.at(t.mon.exps[xi]) = t.coeff;
    }
    return r;
}

Polynomial poly_from_series(const TruncatedSeries& s, const VarTablePtr& table) {
    std::size_t xi = table->parameter_index();
    if (xi == VarTable::npos)
        fail(ErrorKind::UnknownVariable, "poly_from_series: table has no base parameter");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < s.precision(); ++i) {
        if (rat_is_zero(s[i])) continue;
        Monomial m(table->size());
        m.exps[xi] = static_cast<std::uint32_t>(i);
        terms.push_back({std::move(m), s[i]});
    }
    return Polynomial::from_terms(table, std::move(terms));
}

std::string TruncatedSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (rat_is_zero(coeffs_[i])) continue;
        Rat c = coeffs_[i];
        bool neg = sgn(c) < 0;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (neg) c = -c;
        if (i == 0) {
            os << rat_str(c);
        } else {
            if (c != 1) os << rat_str(c) << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    os << " + O(x^" << coeffs_.size() << ")";
    return os.str();
}

} // namespace neron
