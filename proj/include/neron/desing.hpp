#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neron/groebner.hpp"
#include "neron/polymatrix.hpp"
#include "neron/series.hpp"

namespace neron {

// How the divisor d is derived from P(y'):
//   Normalized: d = x^c, the unit cofactor is folded into e (default).
//   Exact:      d = P(y') itself, e = 1; requires d^2 to divide f(y')
//               exactly in Q[x].
enum class DMode { Normalized, Exact };

struct MinorPosition {
    std::vector<std::size_t> rows; // 0-based into the selected system
    std::vector<std::size_t> cols; // 0-based into the unknowns

    bool operator==(const MinorPosition& o) const { return rows == o.rows && cols == o.cols; }
};

struct DesingHints {
    std::optional<std::vector<std::size_t>> f_indices; // 0-based into ideal_gens
    std::optional<Polynomial> L;
    std::optional<MinorPosition> minor;
};

// A desingularization instance over the base k[x]_(x): unknowns Y, an ideal
// in Q[x, Y], and a polynomial approximation y' of a series solution known
// modulo x^N.
struct DesingProblem {
    std::size_t precision = 0;
    VarTablePtr table;                    // [x, unknowns...]
    std::vector<std::size_t> unknowns;    // indices into table
    std::vector<Polynomial> ideal_gens;   // nonzero, in Q[x, Y]
    std::vector<Polynomial> point;        // per unknown, in Q[x], degree < N
    DesingHints hints;
    DMode d_mode = DMode::Normalized;

    std::size_t x_index() const { return table->parameter_index(); }
    void validate() const;
};

// The selected data certifying that the construction can proceed: the system
// f, the colon witness L, the minor M, and the derived d, e with
// d * e = P(y') exactly and x_order(d) = c.
struct SystemChoice {
    std::vector<std::size_t> f_indices;
    std::size_t r = 0;
    std::vector<std::size_t> permutation; // column layout of H, original indices
    Polynomial L;
    MinorPosition minor;
    Polynomial minor_value; // the minor as a polynomial
    Polynomial P;           // L * det(H)
    std::size_t c = 0;
    Polynomial d;
    Polynomial e;
};

struct LInvariantEntry {
    MinorPosition position;
    Polynomial minor;
    std::optional<std::size_t> order; // nullopt: at least N (or the minor vanishes)
};

struct LInvariantReport {
    std::size_t r = 0;
    std::vector<LInvariantEntry> table;
    std::optional<std::size_t> l; // min of the finite orders
};

enum class PresentationKind { Full, LocalizationOnly };

// The emitted smooth presentation C together with the factoring morphism.
// For the full kind, relations are the g_i over the auxiliary variables and
// substitution lists the images b = y' + d G(y') T of the unknowns; the
// identity f_i(b) = d^2 g_i holds exactly. For localization-only (c = 0)
// the relations are the original ideal and inverted = {P}.
struct SmoothPresentation {
    PresentationKind kind = PresentationKind::Full;
    std::size_t precision = 0;
    VarTablePtr out_table;                 // [x, Y..., T...] (full) or problem table
    std::vector<std::size_t> aux_vars;     // indices of T in out_table (full only)
    std::vector<Polynomial> relations;     // g (full) or original ideal
    std::vector<Polynomial> inverted;      // {s, s'} or {P}
    std::vector<Polynomial> substitution;  // per unknown, the image of Y_i
    SystemChoice certificate;
    // taylor split data (full only)
    std::vector<Polynomial> a_parts;
    std::vector<Polynomial> q_parts;
};

struct LiftResult {
    std::vector<TruncatedSeries> t_star; // per aux variable, precision N
    std::vector<Polynomial> y_star;      // per unknown, exact b(t*)
    std::vector<std::size_t> residual_orders; // x-order of f_i(y*), i in the system
};

// Step 1-4 search: deterministic scan over subset sizes, subsets, colon
// generators, and minor positions; minimal c wins, ties broken in
// enumeration order. Hints restrict the scan. Candidates are evaluated in
// parallel and folded in enumeration order.
SystemChoice select_system(const DesingProblem& p);

// Minor/valuation table for a chosen system.
LInvariantReport l_invariant(const DesingProblem& p, const std::vector<std::size_t>& f_indices);

struct TaylorSplit {
    std::vector<Polynomial> a; // in x * Q[x]
    Polynomial e;
    std::vector<Polynomial> q; // in (T)^2
};

// Exact decomposition f_i(y' + d G(y') T) = d^2 (a_i + e T_i + Q_i), by full
// substitution and exact division. `b` are the substitution images in the
// extended table, `f` the selected system lifted to that table.
TaylorSplit taylor_split(const std::vector<Polynomial>& f, const std::vector<Polynomial>& fy,
                         const std::vector<Polynomial>& fb, const SystemChoice& choice,
                         const VarTablePtr& ext, const std::vector<std::size_t>& aux_vars,
                         std::size_t precision);

SmoothPresentation build_desingularization(const DesingProblem& p, const SystemChoice& choice);

// Solve g(T) = 0 for the first r auxiliary variables by x-adic fixed-point
// iteration with the remaining ones set to zero; the residuals f_i(y*) then
// vanish to order at least N + 2c.
LiftResult lift_point(const DesingProblem& p, const SmoothPresentation& pres);

// End-to-end outcome of one run.
enum class DesingStatus { Smooth, Localization, NotWellChosen, NoSystem };

struct DesingResult {
    DesingStatus status = DesingStatus::Smooth;
    std::string message;
    std::optional<SmoothPresentation> presentation;
    std::optional<SystemChoice> choice;
    std::optional<LInvariantReport> l_table;
    std::optional<LiftResult> lift;
};

DesingResult desingularize(const DesingProblem& p);

} // namespace neron
