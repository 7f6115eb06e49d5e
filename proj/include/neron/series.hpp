#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "neron/polynomial.hpp"
#include "neron/rational.hpp"

namespace neron {

// Order of a truncated series: either an exact value below the precision, or
// "at least N" when every stored coefficient vanishes. The two cases are kept
// distinct; callers that need a number from an at-least value must decide
// explicitly (usually by failing with precision-insufficient).
struct SeriesOrder {
    bool at_least = false;
    std::size_t value = 0;

    static SeriesOrder exact(std::size_t v) { return {false, v}; }
    static SeriesOrder bound(std::size_t n) { return {true, n}; }
    bool operator==(const SeriesOrder& o) const {
        return at_least == o.at_least && value == o.value;
    }
};

// Element of k[[x]] known modulo x^N. Coefficient i is the coefficient of
// x^i; the vector always has length N, trailing zeros included.
class TruncatedSeries {
  public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(std::size_t precision)
        : coeffs_(precision, Rat(0)) {
        if (precision == 0) fail(ErrorKind::Validation, "series precision must be positive");
    }
    TruncatedSeries(std::size_t precision, std::vector<Rat> coeffs)
        : coeffs_(std::move(coeffs)) {
        if (precision == 0) fail(ErrorKind::Validation, "series precision must be positive");
        coeffs_.resize(precision, Rat(0));
    }

    std::size_t precision() const { return coeffs_.size(); }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& operator[](std::size_t i) const { return coeffs_.at(i); }
    Rat& at(std::size_t i) { return coeffs_.at(i); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!rat_is_zero(c)) return false;
        return true;
    }

    TruncatedSeries truncated(std::size_t n) const {
        TruncatedSeries r(n);
        for (std::size_t i = 0; i < n && i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i];
        return r;
    }

    bool operator==(const TruncatedSeries& o) const { return coeffs_ == o.coeffs_; }

    std::string str() const;

  private:
    std::vector<Rat> coeffs_;
};

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_sub(const TruncatedSeries& a, const TruncatedSeries& b);
// Cauchy product at min(precision a, precision b).
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, const Rat& c);
// Multiply by x^k (shifts coefficients, drops overflow past the precision).
TruncatedSeries series_shift(const TruncatedSeries& a, std::size_t k);

// Newton iteration with precision doubling; requires a unit (nonzero constant
// coefficient).
TruncatedSeries series_inverse(const TruncatedSeries& a);
// Newton iteration; requires constant coefficient 1.
TruncatedSeries series_sqrt(const TruncatedSeries& a);

SeriesOrder series_order(const TruncatedSeries& a);

// Built-in generators: sum x^i/i! and sum i!*x^i.
TruncatedSeries series_exp(std::size_t precision);
TruncatedSeries series_fact(std::size_t precision);

// Conversions against polynomials in the base parameter only.
TruncatedSeries series_from_poly(const Polynomial& p, std::size_t precision);
Polynomial poly_from_series(const TruncatedSeries& s, const VarTablePtr& table);

} // namespace neron
