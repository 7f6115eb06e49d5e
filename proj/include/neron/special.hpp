#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "neron/desing.hpp"

namespace neron {

// Artinian local base k[T]/(a) with its finite monomial basis.
struct ArtinianBase {
    VarTablePtr t_table;                 // the nilpotent variables only
    std::vector<Polynomial> relations;   // the ideal a
    GroebnerBasis gb;                    // reduced basis of a
    std::vector<Monomial> basis;         // standard monomials, ascending, 1 first
    std::size_t nil_index = 0;           // least s with T_i^s in (a) for all i
};

ArtinianBase artinian_basis(const VarTablePtr& t_table, const std::vector<Polynomial>& relations);

// Name of the coefficient variable carrying the T^alpha component of an
// unknown: the unknown's own name for alpha = 1, otherwise name_mon with the
// monomial spelled out.
std::string coeff_var_name(const std::string& unknown, const Monomial& alpha,
                           const VarTable& t_table);

// A morphism into k[[x]][T]/(a) given coefficientwise, plus the data needed
// to flatten it to a one-dimensional problem.
struct SpecialProblem {
    std::size_t precision = 0;
    ArtinianBase base;
    VarTablePtr ring;                          // [T..., unknowns...]
    std::vector<std::size_t> unknowns;         // indices into ring
    std::vector<Polynomial> ideal_gens;        // in k[T, Y]
    // table[(unknown position, basis position)] -> coefficient series
    std::map<std::pair<std::size_t, std::size_t>, TruncatedSeries> table;
    std::optional<std::vector<std::string>> presentation_J; // polynomial text, coefficient vars
    // hints forwarded to the inner run, resolved against the flattened ring
    std::optional<std::vector<std::size_t>> hint_f; // 0-based into the presentation
    std::optional<std::string> hint_L_text;
    std::optional<std::vector<std::string>> hint_minor_rows; // numeric tokens, 1-based
    std::optional<std::vector<std::string>> hint_minor_cols; // numeric tokens or names
    DMode d_mode = DMode::Normalized;

    void validate() const;
};

// The coefficient ring and bookkeeping produced by flattening.
struct Flattened {
    DesingProblem problem;
    // coefficient variable names in deterministic order (unknown-major,
    // basis ascending), parallel to `series`
    std::vector<std::string> coeff_names;
    std::vector<std::pair<std::size_t, std::size_t>> coeff_keys; // (unknown, basis) per name
    std::vector<TruncatedSeries> series;
    std::vector<std::size_t> chosen;   // indices into coeff_names used as unknowns
    std::vector<std::size_t> leftover; // coefficient vars kept as free generators
    bool used_fallback = false;        // presentation came from expand_relations
};

// Substitute Y_i -> sum over basis monomials of Z_{i,alpha} T^alpha into the
// ideal, reduce modulo the base relations, and collect the coefficient of
// each basis monomial; the x-content of each collected relation is stripped.
// Every returned relation is checked to vanish on the series table mod x^N.
std::vector<Polynomial> expand_relations(const SpecialProblem& p, const VarTablePtr& coeff_table,
                                         const std::vector<std::string>& coeff_names);

Flattened flatten(const SpecialProblem& p);

// The assembled output over A: base relations, the inner relations, the
// inner inverted elements (plus the denominator-clearing eta, 1 for
// polynomial data), and the reassembled images of the original unknowns.
struct SpecialPresentation {
    std::size_t precision = 0;
    ArtinianBase base;
    VarTablePtr out_table; // [T..., x, inner vars..., free coefficient vars...]
    std::vector<Polynomial> base_relations;
    std::vector<Polynomial> relations;
    std::vector<Polynomial> inverted;
    Polynomial eta;
    std::vector<Polynomial> pi; // per original unknown
    std::vector<std::string> free_vars;
    DesingResult inner;
    Flattened flat;
};

SpecialPresentation descend_tensor(const DesingResult& inner, const SpecialProblem& p,
                                   const Flattened& flat);

struct SpecialResult {
    DesingStatus status = DesingStatus::Smooth; // NotWellChosen means bound-too-small here
    std::string message;
    std::optional<SpecialPresentation> presentation;
};

SpecialResult special_desingularization(const SpecialProblem& p);

} // namespace neron
