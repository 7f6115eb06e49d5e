#pragma once

#include <cstddef>
#include <string>

#include "neron/monomial.hpp"

namespace neron {

// Total order on monomials, compatible with multiplication.
//   lex        — pure lexicographic, first table variable most significant
//   degrevlex  — total degree, ties by reverse lexicographic on the last variable
//   block      — elimination order: degrevlex on the first `block` variables,
//                then degrevlex on the rest (front block dominates)
struct MonomialOrder {
    enum class Kind { Lex, DegRevLex, Block };

    Kind kind = Kind::DegRevLex;
    std::size_t block = 0;

    static MonomialOrder lex() { return {Kind::Lex, 0}; }
    static MonomialOrder degrevlex() { return {Kind::DegRevLex, 0}; }
    static MonomialOrder block_elim(std::size_t front) { return {Kind::Block, front}; }

    bool operator==(const MonomialOrder& o) const {
        return kind == o.kind && (kind != Kind::Block || block == o.block);
    }

    std::string str() const {
        switch (kind) {
            case Kind::Lex: return "lex";
            case Kind::DegRevLex: return "degrevlex";
            case Kind::Block: return "block(" + std::to_string(block) + ")";
        }
        return "?";
    }

    // negative: a < b, zero: equal, positive: a > b
    int compare(const Monomial& a, const Monomial& b) const {
        switch (kind) {
            case Kind::Lex: return cmp_lex(a, b, 0, a.size());
            case Kind::DegRevLex: return cmp_drl(a, b, 0, a.size());
            case Kind::Block: {
                std::size_t k = block < a.size() ? block : a.size();
                if (int c = cmp_drl(a, b, 0, k)) return c;
                return cmp_drl(a, b, k, a.size());
            }
        }
        return 0;
    }

    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
    bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  private:
    static int cmp_lex(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            if (a.exps[i] != b.exps[i]) return a.exps[i] < b.exps[i] ? -1 : 1;
        }
        return 0;
    }

    static int cmp_drl(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
        std::uint64_t da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            da += a.exps[i];
            db += b.exps[i];
        }
        if (da != db) return da < db ? -1 : 1;
        // reverse lex: the monomial with the smaller exponent on the last
        // differing variable is the larger one
        for (std::size_t i = hi; i > lo;) {
            --i;
            if (a.exps[i] != b.exps[i]) return a.exps[i] > b.exps[i] ? -1 : 1;
        }
        return 0;
    }
};

} // namespace neron
