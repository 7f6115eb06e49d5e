#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "neron/error.hpp"

namespace neron {

// Exponent vector indexed by a VarTable.
struct Monomial {
    std::vector<std::uint32_t> exps;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps(nvars, 0) {}

    std::size_t size() const { return exps.size(); }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto e : exps) d += e;
        return d;
    }

    bool is_one() const {
        for (auto e : exps)
            if (e) return false;
        return true;
    }

    bool operator==(const Monomial& o) const { return exps == o.exps; }
};

inline Monomial mon_mul(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.exps[i] = a.exps[i] + b.exps[i];
    return r;
}

inline bool mon_divides(const Monomial& a, const Monomial& b) {
    // a | b
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.exps[i] > b.exps[i]) return false;
    return true;
}

inline Monomial mon_div(const Monomial& a, const Monomial& b) {
    // a / b, requires b | a
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b.exps[i] > a.exps[i]) fail(ErrorKind::Internal, "monomial division not exact");
        r.exps[i] = a.exps[i] - b.exps[i];
    }
    return r;
}

inline Monomial mon_lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r.exps[i] = a.exps[i] > b.exps[i] ? a.exps[i] : b.exps[i];
    return r;
}

inline bool mon_coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.exps[i] && b.exps[i]) return false;
    return true;
}

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::size_t h = 1469598103934665603ull;
        for (auto e : m.exps) {
            h ^= e;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace neron
