#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "neron/monomial.hpp"
#include "neron/order.hpp"
#include "neron/rational.hpp"
#include "neron/vartable.hpp"

namespace neron {

struct Term {
    Monomial mon;
    Rat coeff;
};

// Order of a univariate polynomial in the base parameter: the least exponent
// with a nonzero coefficient, infinite for the zero polynomial.
struct XOrder {
    bool infinite = true;
    std::uint64_t value = 0;

    static XOrder inf() { return {true, 0}; }
    static XOrder at(std::uint64_t v) { return {false, v}; }
    bool operator==(const XOrder& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

// Sparse exact multivariate polynomial over the rationals. Terms are kept
// strictly descending in the active monomial order with no zero coefficients;
// the zero polynomial has an empty term list.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(VarTablePtr table, MonomialOrder order = MonomialOrder::degrevlex())
        : table_(std::move(table)), order_(order) {}

    static Polynomial zero(const VarTablePtr& t,
                           MonomialOrder order = MonomialOrder::degrevlex()) {
        return Polynomial(t, order);
    }
    static Polynomial constant(const VarTablePtr& t, const Rat& c,
                               MonomialOrder order = MonomialOrder::degrevlex());
    static Polynomial variable(const VarTablePtr& t, std::size_t var, std::uint32_t exp = 1,
                               MonomialOrder order = MonomialOrder::degrevlex());
    static Polynomial term(const VarTablePtr& t, Monomial m, Rat c,
                           MonomialOrder order = MonomialOrder::degrevlex());
    // Build from arbitrary (monomial, coefficient) pairs; collects and sorts.
    static Polynomial from_terms(const VarTablePtr& t, std::vector<Term> terms,
                                 MonomialOrder order = MonomialOrder::degrevlex());

    const VarTablePtr& table() const { return table_; }
    const MonomialOrder& order() const { return order_; }
    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].mon.is_one());
    }
    // Constant coefficient (value at the all-zero point).
    Rat constant_coeff() const;

    const Term& leading_term() const {
        if (terms_.empty()) fail(ErrorKind::Internal, "leading term of zero polynomial");
        return terms_.front();
    }

    std::uint64_t total_degree() const;
    std::uint32_t degree_in(std::size_t var) const;

    Polynomial with_order(MonomialOrder order) const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const Rat& c) const;
    Polynomial mul_term(const Monomial& m, const Rat& c) const;
    Polynomial pow(std::uint64_t e) const;

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Divide by the leading coefficient.
    Polynomial monic() const;
    // Scale so integer coefficients with content 1 and positive lead.
    Polynomial primitive() const;

    std::string str() const;

  private:
    VarTablePtr table_;
    MonomialOrder order_ = MonomialOrder::degrevlex();
    std::vector<Term> terms_;

    void sort_terms();
    friend Polynomial poly_add_impl(const Polynomial& a, const Polynomial& b, int sign);
};

// Formal partial derivative with respect to a table variable.
Polynomial differentiate(const Polynomial& p, std::size_t var);
Polynomial differentiate(const Polynomial& p, const std::string& var);

// Simultaneous substitution. Variables absent from the map are retained.
Polynomial substitute(const Polynomial& p,
                      const std::map<std::size_t, Polynomial>& images);

// Least x-exponent with nonzero coefficient; requires p to involve only the
// base parameter.
XOrder x_order(const Polynomial& p);
// x-order of an arbitrary polynomial: min over terms of the parameter exponent.
XOrder x_content_order(const Polynomial& p);

// Exact division; fails (Internal) when the division leaves a remainder.
Polynomial exact_divide(const Polynomial& p, const Polynomial& q);

// p rebuilt over a compatible table; `map[i]` gives the index in `to` of
// variable i of p's table. Exponents on unmapped variables must be zero
// (pass npos to assert a variable is unused).
Polynomial remap(const Polynomial& p, const VarTablePtr& to,
                 const std::vector<std::size_t>& map,
                 std::optional<MonomialOrder> order = std::nullopt);

} // namespace neron
