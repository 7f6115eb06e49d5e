#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "neron/special.hpp"
#include "test_util.hpp"

using namespace nt;

namespace {

VarTablePtr t_table(const std::vector<std::string>& names) {
    return make_table(names, std::vector<VarRole>(names.size(), VarRole::Nilpotent));
}

// The square-zero fixture: A = Q[t]/(t^2), B = A[Y1,Y2]/(Y1^3 - Y2^2),
// y1 = x^2 u1 + t v1, y2 = x^3 u2 + t x v2.
SpecialProblem dual_numbers_problem(std::size_t N) {
    SpecialProblem p;
    p.precision = N;
    auto tt = t_table({"t"});
    p.base = artinian_basis(tt, {P("t^2", tt)});
    p.ring = make_table({"t", "Y1", "Y2"},
                        {VarRole::Nilpotent, VarRole::Unknown, VarRole::Unknown});
    p.unknowns = {p.ring->index("Y1"), p.ring->index("Y2")};
    p.ideal_gens = {P("Y1^3 - Y2^2", p.ring)};
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(0, 0),
                    eval_series_expr("x^2*EXP", N));
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(0, 1), eval_series_expr("FACT", N));
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(1, 0),
                    eval_series_expr("x^3*sqrt(EXP^3)", N));
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(1, 1),
                    eval_series_expr("x*(3/2)*EXP^2*FACT*inv(sqrt(EXP^3))", N));
    return p;
}

const std::vector<std::string> kKernelPresentation = {
    "Y1^3 - Y2^2",
    "3*Y1^2*Y1_t - 2*Y2*Y2_t",
    "27*Y2*Y1_t^3 - 8*Y2_t^3",
    "9*Y1*Y1_t^2 - 4*Y2_t^2",
    "2*Y1*Y2_t - 3*Y2*Y1_t",
};

} // namespace

TEST_CASE("artinian basis") {
    SUBCASE("dual numbers") {
        auto tt = t_table({"t"});
        ArtinianBase b = artinian_basis(tt, {P("t^2", tt)});
        REQUIRE(b.basis.size() == 2);
        CHECK(b.basis[0].is_one());
        CHECK(b.basis[1].exps[0] == 1);
        CHECK(b.nil_index == 2);
    }
    SUBCASE("field") {
        auto tt = t_table({"T"});
        ArtinianBase b = artinian_basis(tt, {P("T", tt)});
        REQUIRE(b.basis.size() == 1);
        CHECK(b.basis[0].is_one());
        CHECK(b.nil_index == 1);
    }
    SUBCASE("square of the maximal ideal in two variables") {
        auto tt = t_table({"T1", "T2"});
        ArtinianBase b =
            artinian_basis(tt, {P("T1^2", tt), P("T1*T2", tt), P("T2^2", tt)});
        REQUIRE(b.basis.size() == 3);
        CHECK(b.basis[0].is_one());
        CHECK(b.nil_index == 2);
    }
    SUBCASE("non-Artinian quotient is rejected") {
        auto tt = t_table({"T1", "T2"});
        CHECK_THROWS_AS(artinian_basis(tt, {P("T1", tt)}), Error);
    }
}

TEST_CASE("coefficient variable names") {
    auto tt = t_table({"t"});
    ArtinianBase b = artinian_basis(tt, {P("t^2", tt)});
    CHECK(coeff_var_name("Y1", b.basis[0], *tt) == "Y1");
    CHECK(coeff_var_name("Y1", b.basis[1], *tt) == "Y1_t");
}

TEST_CASE("expand_relations collects the coefficientwise system") {
    SpecialProblem p = dual_numbers_problem(12);
    std::vector<std::string> names{"Y1", "Y1_t", "Y2", "Y2_t"};
    std::vector<std::string> tnames{"x"};
    std::vector<VarRole> troles{VarRole::Parameter};
    for (const auto& nm : names) {
        tnames.push_back(nm);
        troles.push_back(VarRole::Unknown);
    }
    VarTablePtr ct = make_table(tnames, troles);

    auto J0 = expand_relations(p, ct, names);
    REQUIRE(J0.size() == 2);
    CHECK(J0[0] == P("Y1^3 - Y2^2", ct));
    CHECK(J0[1] == P("3*Y1^2*Y1_t - 2*Y2*Y2_t", ct));
}

TEST_CASE("expand_relations rejects an inconsistent table") {
    SpecialProblem p = dual_numbers_problem(12);
    p.table.at({0, 1}) = eval_series_expr("FACT + 1", 12); // breaks the t-coefficient
    std::vector<std::string> names{"Y1", "Y1_t", "Y2", "Y2_t"};
    std::vector<std::string> tnames{"x"};
    std::vector<VarRole> troles{VarRole::Parameter};
    for (const auto& nm : names) {
        tnames.push_back(nm);
        troles.push_back(VarRole::Unknown);
    }
    VarTablePtr ct = make_table(tnames, troles);
    CHECK_THROWS_AS(expand_relations(p, ct, names), Error);
}

TEST_CASE("expand_relations with zero nilpotent part renames the generators") {
    SpecialProblem p = dual_numbers_problem(8);
    p.table.at({0, 1}) = TruncatedSeries(8);
    p.table.at({1, 1}) = TruncatedSeries(8);
    std::vector<std::string> names{"Y1", "Y1_t", "Y2", "Y2_t"};
    std::vector<std::string> tnames{"x"};
    std::vector<VarRole> troles{VarRole::Parameter};
    for (const auto& nm : names) {
        tnames.push_back(nm);
        troles.push_back(VarRole::Unknown);
    }
    VarTablePtr ct = make_table(tnames, troles);
    auto J0 = expand_relations(p, ct, names);
    REQUIRE(!J0.empty());
    CHECK(J0[0] == P("Y1^3 - Y2^2", ct));
}

TEST_CASE("flatten with the plain cusp presentation gives the two-variable problem") {
    SpecialProblem p = dual_numbers_problem(7);
    p.presentation_J = std::vector<std::string>{"Y1^3 - Y2^2"};
    Flattened f = flatten(p);
    CHECK(!f.used_fallback);
    CHECK(f.problem.unknowns.size() == 2);
    CHECK(f.problem.table->name(f.problem.unknowns[0]) == "Y1");
    CHECK(f.problem.table->name(f.problem.unknowns[1]) == "Y2");
    REQUIRE(f.leftover.size() == 2);
    CHECK(f.coeff_names[f.leftover[0]] == "Y1_t");
    CHECK(f.coeff_names[f.leftover[1]] == "Y2_t");
    // the point is the constant-part pair
    CHECK(f.problem.point[0] == poly_from_series(eval_series_expr("x^2*EXP", 7), f.problem.table));
    CHECK(f.problem.point[1] ==
          poly_from_series(eval_series_expr("x^3*sqrt(EXP^3)", 7), f.problem.table));
}

TEST_CASE("flatten with the full kernel presentation reaches c = 15") {
    SpecialProblem p = dual_numbers_problem(31);
    p.presentation_J = kKernelPresentation;
    p.hint_f = std::vector<std::size_t>{0, 1};
    p.hint_L_text = "Y2^3";
    p.hint_minor_rows = std::vector<std::string>{"1", "2"};
    p.hint_minor_cols = std::vector<std::string>{"Y2", "Y2_t"};
    Flattened f = flatten(p);
    CHECK(f.problem.unknowns.size() == 4);
    CHECK(f.leftover.empty());
    SystemChoice c = select_system(f.problem);
    CHECK(c.c == 15);
    CHECK(c.minor_value == P("4*Y2^2", f.problem.table));
}

TEST_CASE("flatten rejects a presentation that misses the table") {
    SpecialProblem p = dual_numbers_problem(12);
    p.presentation_J = std::vector<std::string>{"Y1^3 - Y2^2", "Y1_t - 1"};
    CHECK_THROWS_AS(flatten(p), Error);
}

TEST_CASE("special run on the plain presentation matches the dim-1 run") {
    SpecialProblem p = dual_numbers_problem(7);
    p.presentation_J = std::vector<std::string>{"Y1^3 - Y2^2"};
    SpecialResult r = special_desingularization(p);
    REQUIRE(r.status == DesingStatus::Smooth);
    REQUIRE(r.presentation);
    const SpecialPresentation& sp = *r.presentation;

    // the inner run equals the plain cusp run
    DesingProblem inner = flatten(p).problem;
    DesingResult direct = desingularize(inner);
    REQUIRE(direct.presentation);
    CHECK(sp.inner.presentation->relations[0] == direct.presentation->relations[0]);

    // eta = 1 and the relations repeat the inner ones verbatim
    CHECK(sp.eta == Polynomial::constant(sp.out_table, 1));
    REQUIRE(sp.relations.size() == 1);
    REQUIRE(sp.base_relations.size() == 1);

    // pi(Y1) = b1 + t*Y1_t
    Polynomial b1 = sp.inner.presentation->substitution[0];
    std::vector<std::size_t> mp(b1.table()->size());
    for (std::size_t i = 0; i < mp.size(); ++i) mp[i] = sp.out_table->index(b1.table()->name(i));
    Polynomial expected = remap(b1, sp.out_table, mp) +
                          P("t", sp.out_table) * Polynomial::variable(
                                                     sp.out_table, sp.out_table->index("Y1_t"));
    CHECK(sp.pi[0] == expected);
}

TEST_CASE("bound too small propagates from the inner run") {
    SpecialProblem p = dual_numbers_problem(5); // 2c+1 = 7 > 5
    p.presentation_J = std::vector<std::string>{"Y1^3 - Y2^2"};
    SpecialResult r = special_desingularization(p);
    CHECK(r.status == DesingStatus::NotWellChosen);
    CHECK(r.message == "the algorithm fails since the bound is too small");
}

TEST_CASE("trivial base reduces to the identity flattening") {
    SpecialProblem p;
    p.precision = 7;
    auto tt = t_table({"T"});
    p.base = artinian_basis(tt, {P("T", tt)});
    p.ring = make_table({"T", "Y1", "Y2"},
                        {VarRole::Nilpotent, VarRole::Unknown, VarRole::Unknown});
    p.unknowns = {p.ring->index("Y1"), p.ring->index("Y2")};
    p.ideal_gens = {P("Y1^3 - Y2^2", p.ring)};
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(0, 0),
                    eval_series_expr("x^2*EXP", 7));
    p.table.emplace(std::make_pair<std::size_t, std::size_t>(1, 0),
                    eval_series_expr("x^3*sqrt(EXP^3)", 7));
    Flattened f = flatten(p);
    CHECK(f.used_fallback);
    CHECK(f.problem.unknowns.size() == 2);
    CHECK(f.problem.ideal_gens.size() == 1);
    CHECK(f.problem.ideal_gens[0] == P("Y1^3 - Y2^2", f.problem.table));
    SpecialResult r = special_desingularization(p);
    CHECK(r.status == DesingStatus::Smooth);
}
