#pragma once

#include <memory>
#include <string>
#include <vector>

#include "neron/error.hpp"

namespace neron {

enum class VarRole {
    Parameter, // the distinguished base parameter x
    Nilpotent, // base nilpotent generators of an Artinian base
    Unknown,   // the unknowns the morphism approximates
    Aux,       // auxiliary variables introduced by the construction
    Tag,       // elimination helper
};

// Immutable ordered table of named variables. Polynomials reference their
// table through a shared pointer; two polynomials interoperate when their
// tables are the same object or structurally equal.
class VarTable {
  public:
    VarTable(std::vector<std::string> names, std::vector<VarRole> roles)
        : names_(std::move(names)), roles_(std::move(roles)) {
        if (names_.size() != roles_.size())
            fail(ErrorKind::Validation, "var table: names/roles size mismatch");
        int params = 0;
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty())
                fail(ErrorKind::Validation, "var table: empty variable name");
            if (roles_[i] == VarRole::Parameter) ++params;
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    fail(ErrorKind::Validation, "var table: duplicate variable " + names_[i]);
        }
        if (params > 1)
            fail(ErrorKind::Validation, "var table: more than one base parameter");
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    VarRole role(std::size_t i) const { return roles_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    bool has(const std::string& n) const {
        for (const auto& s : names_)
            if (s == n) return true;
        return false;
    }

    std::size_t index(const std::string& n) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == n) return i;
        fail(ErrorKind::UnknownVariable, "unknown variable: " + n);
    }

    // Index of the base parameter, or npos when the table has none.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t parameter_index() const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (roles_[i] == VarRole::Parameter) return i;
        return npos;
    }

    bool operator==(const VarTable& o) const {
        return names_ == o.names_ && roles_ == o.roles_;
    }

  private:
    std::vector<std::string> names_;
    std::vector<VarRole> roles_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline VarTablePtr make_table(std::vector<std::string> names, std::vector<VarRole> roles) {
    return std::make_shared<VarTable>(std::move(names), std::move(roles));
}

inline bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_table(const VarTablePtr& a, const VarTablePtr& b) {
    if (!same_table(a, b))
        fail(ErrorKind::VarTableMismatch, "operands use different variable tables");
}

} // namespace neron
