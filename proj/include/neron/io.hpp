#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "neron/special.hpp"

namespace neron {

using Json = nlohmann::ordered_json;

// Parsed problem file. Payload polynomials and series stay as text here;
// build_dvr/build_special evaluate them at the stated precision.
struct ProblemFile {
    std::size_t precision = 0;
    bool artinian = false;
    std::vector<std::string> t_vars;
    std::vector<std::string> relations_a;
    std::vector<std::string> unknowns;
    std::vector<std::string> ideal;
    std::vector<std::pair<std::string, std::string>> point_dvr; // unknown -> series expr
    std::vector<std::tuple<std::string, std::string, std::string>> point_art;
    std::optional<std::vector<std::string>> presentation_J;
    std::optional<std::vector<std::size_t>> hint_f; // 1-based
    std::optional<std::string> hint_L;
    std::optional<std::vector<std::string>> hint_minor_rows; // numeric tokens, 1-based
    std::optional<std::vector<std::string>> hint_minor_cols; // numeric tokens or names
    std::optional<DMode> d_mode;
};

ProblemFile parse_problem(const std::string& text);
Json emit_problem(const ProblemFile& pf);

DesingProblem build_dvr(const ProblemFile& pf, std::optional<DMode> mode_override = std::nullopt);
SpecialProblem build_special(const ProblemFile& pf,
                             std::optional<DMode> mode_override = std::nullopt);

Json emit_result(const DesingProblem& p, const DesingResult& r);
Json emit_result(const SpecialProblem& p, const SpecialResult& r);

struct VerifyCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

// Re-checks every invariant of a result file against its problem file.
std::vector<VerifyCheck> verify_result(const ProblemFile& pf, const Json& result);

// Exit codes: 0 success, 2 for the expected algorithmic failure branches
// (not-well-chosen / bound-too-small), 1 for input or internal errors.
int run_cli(int argc, char** argv);

} // namespace neron
