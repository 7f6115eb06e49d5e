#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "neron/desing.hpp"
#include "neron/expr.hpp"
#include "test_util.hpp"

using namespace nt;

namespace {

// The recurring fixture: the cusp with two extra unknowns, the map sending
// (Y1, Y2, Y3, Y4) to (x^2 u1, x^3 u2, v1, x v2) with u2^2 = u1^3 and
// v2 = (3/2) u1^2 v1 / u2.
DesingProblem cusp4_problem(std::size_t N) {
    DesingProblem p;
    p.precision = N;
    p.table = xy_table({"Y1", "Y2", "Y3", "Y4"});
    for (const auto& u : {"Y1", "Y2", "Y3", "Y4"}) p.unknowns.push_back(p.table->index(u));
    p.ideal_gens = {P("Y1^3 - Y2^2", p.table), P("3*Y1^2*Y3 - 2*Y2*Y4", p.table)};
    p.point = {poly_from_series(eval_series_expr("x^2*EXP", N), p.table),
               poly_from_series(eval_series_expr("x^3*sqrt(EXP^3)", N), p.table),
               poly_from_series(eval_series_expr("FACT", N), p.table),
               poly_from_series(eval_series_expr("x*(3/2)*EXP^2*FACT*inv(sqrt(EXP^3))", N), p.table)};
    return p;
}

// The plane cusp with the tangent-direction point at precision N.
DesingProblem cusp_problem(std::size_t N) {
    DesingProblem p;
    p.precision = N;
    p.table = xy_table({"Y1", "Y2"});
    p.unknowns = {p.table->index("Y1"), p.table->index("Y2")};
    p.ideal_gens = {P("Y1^3 - Y2^2", p.table)};
    p.point = {poly_from_series(eval_series_expr("x^2*EXP", N), p.table),
               poly_from_series(eval_series_expr("x^3*sqrt(EXP^3)", N), p.table)};
    return p;
}

Polynomial xpow(const VarTablePtr& vt, std::uint32_t k) {
    return Polynomial::variable(vt, vt->parameter_index(), k);
}

} // namespace

TEST_CASE("valuation table for the quartic kernel point at N = 10") {
    DesingProblem p = cusp4_problem(10);
    LInvariantReport rep = l_invariant(p, {0, 1});
    REQUIRE(rep.table.size() == 6);
    // orders in (row-set, col-set) enumeration order
    REQUIRE(rep.table[0].order);
    CHECK(*rep.table[0].order == 5);
    CHECK(*rep.table[1].order == 8);
    CHECK(*rep.table[2].order == 7);
    CHECK(*rep.table[3].order == 7);
    CHECK(*rep.table[4].order == 6);
    CHECK(!rep.table[5].order); // the zero minor
    REQUIRE(rep.l);
    CHECK(*rep.l == 5);
    CHECK(rep.table[0].position.cols == std::vector<std::size_t>{0, 1});
}

TEST_CASE("valuation table degenerate cases") {
    DesingProblem p;
    p.precision = 5;
    p.table = xy_table({"Y1"});
    p.unknowns = {p.table->index("Y1")};
    p.ideal_gens = {P("Y1 - x", p.table)};
    p.point = {P("x", p.table)};
    LInvariantReport rep = l_invariant(p, {0});
    REQUIRE(rep.l);
    CHECK(*rep.l == 0); // unit minor
}

TEST_CASE("selection on the plane cusp at N = 7") {
    DesingProblem p = cusp_problem(7);
    SystemChoice c = select_system(p);
    CHECK(c.f_indices == std::vector<std::size_t>{0});
    CHECK(c.r == 1);
    CHECK(c.L == P("1", p.table));
    CHECK(c.minor.cols == std::vector<std::size_t>{1});
    CHECK(c.c == 3);
    CHECK(c.P == P("2*Y2", p.table)); // det of the bordered matrix
    CHECK(c.d == P("x^3", p.table));
    // e = P(y')/x^3 = 2*(u2 truncated below x^4)
    Polynomial expected_e =
        exact_divide(P("2", p.table) * p.point[1], xpow(p.table, 3));
    CHECK(c.e == expected_e);
}

TEST_CASE("selection at N = 10 finds c = 5 and the build refuses") {
    DesingProblem p = cusp4_problem(10);
    SystemChoice c = select_system(p);
    CHECK(c.f_indices == std::vector<std::size_t>{0, 1});
    CHECK(c.c == 5);
    CHECK(c.minor.cols == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_WITH_AS(build_desingularization(p, c), "y', N are not well chosen", Error);

    DesingResult r = desingularize(p);
    CHECK(r.status == DesingStatus::NotWellChosen);
    CHECK(r.message == "y', N are not well chosen");
}

TEST_CASE("unit point gives a localization: c = 0") {
    DesingProblem p = cusp4_problem(10);
    // the unit-series point: drop the x-scales
    p.point = {poly_from_series(eval_series_expr("EXP", 10), p.table),
               poly_from_series(eval_series_expr("sqrt(EXP^3)", 10), p.table),
               poly_from_series(eval_series_expr("FACT", 10), p.table),
               poly_from_series(eval_series_expr("(3/2)*EXP^2*FACT*inv(sqrt(EXP^3))", 10), p.table)};

    SUBCASE("with the minor pinned to columns Y2, Y4") {
        p.hints.minor = MinorPosition{{0, 1}, {1, 3}};
        DesingResult r = desingularize(p);
        REQUIRE(r.status == DesingStatus::Localization);
        REQUIRE(r.presentation);
        CHECK(r.presentation->kind == PresentationKind::LocalizationOnly);
        REQUIRE(r.presentation->inverted.size() == 1);
        CHECK(r.presentation->inverted[0] == P("4*Y2^2", p.table));
        CHECK(r.presentation->relations.size() == 2);
        CHECK(r.choice->c == 0);
        CHECK(r.choice->L == P("1", p.table));
    }
    SUBCASE("unhinted search still localizes at a unit") {
        DesingResult r = desingularize(p);
        REQUIRE(r.status == DesingStatus::Localization);
        CHECK(r.choice->c == 0);
        // deterministic first minimal candidate: column set {Y1, Y2}
        CHECK(r.choice->minor.cols == std::vector<std::size_t>{0, 1});
    }
}

TEST_CASE("full construction on the plane cusp at N = 7") {
    DesingProblem p = cusp_problem(7);
    DesingResult r = desingularize(p);
    REQUIRE(r.status == DesingStatus::Smooth);
    REQUIRE(r.presentation);
    const SmoothPresentation& pres = *r.presentation;
    const VarTablePtr& ext = pres.out_table;
    REQUIRE(pres.aux_vars.size() == 2);
    Polynomial T1 = Polynomial::variable(ext, pres.aux_vars[0]);
    Polynomial T2 = Polynomial::variable(ext, pres.aux_vars[1]);

    auto lift = [&](const Polynomial& q) {
        std::vector<std::size_t> mp(p.table->size());
        for (std::size_t i = 0; i < mp.size(); ++i) mp[i] = ext->index(p.table->name(i));
        return remap(q, ext, mp);
    };
    Polynomial y1 = lift(p.point[0]), y2 = lift(p.point[1]);
    Polynomial x3 = xpow(ext, 3);

    SUBCASE("substitution images match the closed form") {
        // b1 = y1' + 2 x^3 y2' T2 ; b2 = y2' - x^3 T1 + 3 x^3 y1'^2 T2
        CHECK(pres.substitution[0] == y1 + P("2", ext) * x3 * y2 * T2);
        CHECK(pres.substitution[1] == y2 - x3 * T1 + P("3", ext) * x3 * y1 * y1 * T2);
    }

    SUBCASE("taylor split against an independent full expansion") {
        REQUIRE(pres.relations.size() == 1);
        Polynomial e = lift(r.choice->e);
        Polynomial d = lift(r.choice->d);
        // a = f(y')/d^2, frozen from the defining identity
        Polynomial fy = substitute(lift(p.ideal_gens[0]),
                                   {{ext->index("Y1"), y1}, {ext->index("Y2"), y2}});
        Polynomial a = exact_divide(fy, d * d);
        XOrder oa = x_content_order(a);
        REQUIRE(!oa.infinite);
        CHECK(oa.value >= 1);

        // Q by independent expansion: (f(b) - f(y') - d^2 e T1)/d^2
        std::map<std::size_t, Polynomial> to_b;
        to_b.emplace(ext->index("Y1"), pres.substitution[0]);
        to_b.emplace(ext->index("Y2"), pres.substitution[1]);
        Polynomial fb = substitute(lift(p.ideal_gens[0]), to_b);
        Polynomial q_oracle = exact_divide(fb - fy - d * d * e * T1, d * d);

        CHECK(pres.relations[0] == a + e * T1 + q_oracle);

        // the closed form of Q for this system
        Polynomial q_closed = -(T1 * T1) + P("6", ext) * y1 * y1 * T1 * T2 +
                              (P("12", ext) * y1 * y2 * y2 - P("9", ext) * y1.pow(4)) * T2 * T2 +
                              P("8", ext) * x3 * y2.pow(3) * T2.pow(3);
        CHECK(q_oracle == q_closed);
        CHECK(pres.q_parts[0] == q_closed);

        // identity f(b) = d^2 g
        CHECK(fb == d * d * pres.relations[0]);
    }

    SUBCASE("inverted elements") {
        REQUIRE(pres.inverted.size() == 2);
        Polynomial e = lift(r.choice->e);
        Polynomial d = lift(r.choice->d);
        // s = e + dQ/dT1
        CHECK(pres.inverted[0] == e + differentiate(pres.q_parts[0], pres.aux_vars[0]));
        // d s' = P(b)
        std::map<std::size_t, Polynomial> to_b;
        to_b.emplace(ext->index("Y1"), pres.substitution[0]);
        to_b.emplace(ext->index("Y2"), pres.substitution[1]);
        CHECK(d * pres.inverted[1] == substitute(lift(r.choice->P), to_b));
        // units at T = 0
        std::map<std::size_t, Polynomial> tzero;
        for (auto v : pres.aux_vars) tzero.emplace(v, Polynomial::zero(ext));
        CHECK(substitute(pres.inverted[0], tzero) == e);     // e^r with r = 1
        CHECK(substitute(pres.inverted[1], tzero) == e);
    }

    SUBCASE("lift and residual") {
        REQUIRE(r.lift);
        const LiftResult& lr = *r.lift;
        // T2 stays zero; t*_1 is pinned
        CHECK(lr.t_star[1].is_zero());
        TruncatedSeries expected(7);
        expected.at(4) = Rat(-27, 128);
        expected.at(5) = Rat(-13, 256);
        expected.at(6) = Rat(-23, 3072);
        CHECK(lr.t_star[0] == expected);
        REQUIRE(lr.residual_orders.size() == 1);
        CHECK(lr.residual_orders[0] == 13); // N + 2c
    }
}

TEST_CASE("approximation inconsistent with the bound is rejected") {
    DesingProblem p = cusp_problem(7);
    p.point[1] = P("x^3 + x", p.table); // order of f(y') drops below 2c+1
    SystemChoice c = select_system(p);
    CHECK(c.c == 1);
    CHECK_THROWS_AS(build_desingularization(p, c), Error);
    try {
        build_desingularization(p, c);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ApproxTooCoarse);
    }
}

TEST_CASE("exact point: a = 0, the lift fixes the origin") {
    DesingProblem p = cusp_problem(7);
    p.point = {P("x^2", p.table), P("x^3", p.table)};
    SUBCASE("normalized mode") {
        DesingResult r = desingularize(p);
        REQUIRE(r.status == DesingStatus::Smooth);
        CHECK(r.presentation->a_parts[0].is_zero());
        CHECK(r.lift->t_star[0].is_zero());
        CHECK(r.lift->y_star[0] == p.point[0]);
        CHECK(r.lift->y_star[1] == p.point[1]);
        CHECK(r.lift->residual_orders[0] == static_cast<std::size_t>(-1));
    }
    SUBCASE("exact mode: e = 1 and s, s' lie in 1 + (T)") {
        p.d_mode = DMode::Exact;
        DesingResult r = desingularize(p);
        REQUIRE(r.status == DesingStatus::Smooth);
        CHECK(r.choice->e == P("1", p.table));
        CHECK(r.choice->d == P("2*x^3", p.table));
        const auto& pres = *r.presentation;
        std::map<std::size_t, Polynomial> tzero;
        for (auto v : pres.aux_vars) tzero.emplace(v, Polynomial::zero(pres.out_table));
        CHECK(substitute(pres.inverted[0], tzero) == P("1", pres.out_table));
        CHECK(substitute(pres.inverted[1], tzero) == P("1", pres.out_table));
    }
}

TEST_CASE("exact mode requires polynomial divisibility") {
    DesingProblem p = cusp_problem(7);
    p.d_mode = DMode::Exact;
    SystemChoice c = select_system(p);
    CHECK(c.e == P("1", p.table));
    CHECK_THROWS_AS(build_desingularization(p, c), Error);
}

TEST_CASE("hinted selection on the five-generator kernel at N = 31") {
    DesingProblem p = cusp4_problem(31);
    p.ideal_gens = {P("Y1^3 - Y2^2", p.table), P("3*Y1^2*Y3 - 2*Y2*Y4", p.table),
                    P("27*Y2*Y3^3 - 8*Y4^3", p.table), P("9*Y1*Y3^2 - 4*Y4^2", p.table),
                    P("2*Y1*Y4 - 3*Y2*Y3", p.table)};
    p.hints.f_indices = std::vector<std::size_t>{0, 1};
    p.hints.L = P("Y2^3", p.table);
    p.hints.minor = MinorPosition{{0, 1}, {1, 3}};

    SystemChoice c = select_system(p);
    CHECK(c.c == 15);
    CHECK(c.minor_value == P("4*Y2^2", p.table));
    CHECK(c.permutation == std::vector<std::size_t>{0, 2, 3, 1});
    CHECK(c.P == P("-4*Y2^5", p.table)); // L * det(H) with the worked layout
    CHECK(x_order(c.d) == XOrder::at(15));

    DesingResult r = desingularize(p);
    REQUIRE(r.status == DesingStatus::Smooth);
    REQUIRE(r.lift);
    for (auto o : r.lift->residual_orders)
        CHECK((o == static_cast<std::size_t>(-1) || o >= 31 + 30));
}

TEST_CASE("colon search within the pinned subset finds c = 10") {
    DesingProblem p = cusp4_problem(31);
    p.ideal_gens = {P("Y1^3 - Y2^2", p.table), P("3*Y1^2*Y3 - 2*Y2*Y4", p.table),
                    P("27*Y2*Y3^3 - 8*Y4^3", p.table), P("9*Y1*Y3^2 - 4*Y4^2", p.table),
                    P("2*Y1*Y4 - 3*Y2*Y3", p.table)};
    p.hints.f_indices = std::vector<std::size_t>{0, 1};
    SystemChoice c = select_system(p);
    // the colon ideal contains Y1*Y2 (value order 5), beating the cube witness
    CHECK(c.c == 10);
    CHECK(c.L == P("Y1*Y2", p.table));
    CHECK(c.minor.cols == std::vector<std::size_t>{0, 1});
}

TEST_CASE("no admissible system at this precision") {
    DesingProblem p = cusp_problem(7);
    // a point that solves f to full precision but with all minors vanishing
    // to order >= N: use the trivial ideal x-free trick instead: restrict to
    // a subset whose colon evaluates too deep. Simplest: exact zero point on
    // the double line.
    p.ideal_gens = {P("Y2^2", p.table)};
    p.point = {P("0", p.table), P("0", p.table)};
    DesingResult r = desingularize(p);
    CHECK(r.status == DesingStatus::NoSystem);
}

TEST_CASE("random perturbed cusp instances keep the residual bound") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> ncoef(-3, 3);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 20; ++trial) {
        std::size_t N = 7 + (rng() % 3);
        // random unit u1 with constant term 1
        TruncatedSeries u1(N);
        u1.at(0) = 1;
        for (std::size_t i = 1; i < N; ++i) u1.at(i) = ncoef(rng);
        TruncatedSeries u2 = series_sqrt(series_mul(series_mul(u1, u1), u1));

        DesingProblem p;
        p.precision = N;
        p.table = xy_table({"Y1", "Y2"});
        p.unknowns = {p.table->index("Y1"), p.table->index("Y2")};
        p.ideal_gens = {P("Y1^3 - Y2^2", p.table)};
        p.point = {poly_from_series(series_shift(u1, 2), p.table),
                   poly_from_series(series_shift(u2, 3), p.table)};
        DesingResult r = desingularize(p);
        REQUIRE(r.status == DesingStatus::Smooth);
        REQUIRE(r.choice->c == 3);
        for (auto o : r.lift->residual_orders)
            CHECK((o == static_cast<std::size_t>(-1) || o >= N + 2 * r.choice->c));
        ++done;
    }
    CHECK(done == 20);
}

TEST_CASE("determinism: two runs agree exactly") {
    DesingProblem p = cusp_problem(7);
    DesingResult a = desingularize(p);
    DesingResult b = desingularize(p);
    REQUIRE(a.presentation);
    REQUIRE(b.presentation);
    CHECK(a.presentation->relations[0] == b.presentation->relations[0]);
    CHECK(a.presentation->inverted[0] == b.presentation->inverted[0]);
    CHECK(a.presentation->inverted[1] == b.presentation->inverted[1]);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(a.presentation->substitution[i] == b.presentation->substitution[i]);
}
