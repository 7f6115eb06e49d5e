#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "neron/expr.hpp"
#include "neron/series.hpp"
#include "test_util.hpp"

using namespace nt;

namespace {

TruncatedSeries random_series(std::size_t n, std::mt19937& rng, bool unit = false,
                              bool const_one = false) {
    std::uniform_int_distribution<int> coef(-4, 4);
    TruncatedSeries s(n);
    for (std::size_t i = 0; i < n; ++i) s.at(i) = coef(rng);
    if (const_one)
        s.at(0) = 1;
    else if (unit && rat_is_zero(s[0]))
        s.at(0) = 1;
    return s;
}

} // namespace

TEST_CASE("multiplication") {
    TruncatedSeries one_plus(3, {Rat(1), Rat(1), Rat(0)});
    TruncatedSeries one_minus(3, {Rat(1), Rat(-1), Rat(0)});
    TruncatedSeries p = series_mul(one_plus, one_minus);
    CHECK(p == TruncatedSeries(3, {Rat(1), Rat(0), Rat(-1)}));
}

TEST_CASE("sqrt squares back: u2^2 = u1^3 mod x^N") {
    for (std::size_t N : {7u, 8u, 10u, 31u}) {
        TruncatedSeries u1 = series_exp(N);
        TruncatedSeries u1c = series_mul(series_mul(u1, u1), u1);
        TruncatedSeries u2 = series_sqrt(u1c);
        CHECK(series_mul(u2, u2) == u1c);
    }
}

TEST_CASE("order is additive under multiplication") {
    std::mt19937 rng(11);
    for (int i = 0; i < 60; ++i) {
        TruncatedSeries a = random_series(12, rng);
        TruncatedSeries b = random_series(12, rng);
        SeriesOrder oa = series_order(a), ob = series_order(b);
        if (oa.at_least || ob.at_least) continue;
        if (oa.value + ob.value >= 12) continue;
        SeriesOrder op = series_order(series_mul(a, b));
        REQUIRE(!op.at_least);
        CHECK(op.value == oa.value + ob.value);
    }
}

TEST_CASE("inverse") {
    TruncatedSeries g = series_inverse(TruncatedSeries(4, {Rat(1), Rat(-1)}));
    CHECK(g == TruncatedSeries(4, {Rat(1), Rat(1), Rat(1), Rat(1)}));

    TruncatedSeries e3 = series_exp(3);
    TruncatedSeries ie3 = series_inverse(e3);
    CHECK(ie3 == TruncatedSeries(3, {Rat(1), Rat(-1), Rat(1, 2)}));
    CHECK(series_mul(e3, ie3) == TruncatedSeries(3, {Rat(1)}));

    CHECK_THROWS_AS(series_inverse(TruncatedSeries(4, {Rat(0), Rat(1), Rat(1)})), Error);
}

TEST_CASE("inverse is an involution on random units") {
    std::mt19937 rng(12);
    for (int i = 0; i < 40; ++i) {
        TruncatedSeries a = random_series(9, rng, true);
        CHECK(series_inverse(series_inverse(a)) == a);
    }
}

TEST_CASE("sqrt") {
    CHECK(series_sqrt(TruncatedSeries(5, {Rat(1)})) == TruncatedSeries(5, {Rat(1)}));
    TruncatedSeries sq(5, {Rat(1), Rat(2), Rat(1)}); // (1+x)^2
    CHECK(series_sqrt(sq) == TruncatedSeries(5, {Rat(1), Rat(1)}));
    CHECK_THROWS_AS(series_sqrt(TruncatedSeries(4, {Rat(2)})), Error);
    std::mt19937 rng(13);
    for (int i = 0; i < 40; ++i) {
        TruncatedSeries a = random_series(9, rng, false, true);
        TruncatedSeries s = series_sqrt(a);
        CHECK(series_mul(s, s) == a);
    }
}

TEST_CASE("order reporting") {
    TruncatedSeries z(10);
    CHECK(series_order(z) == SeriesOrder::bound(10));

    // x^3 * unit
    TruncatedSeries u = series_exp(8);
    CHECK(series_order(series_shift(u, 3)) == SeriesOrder::exact(3));

    // x^5 (6 u1^2 v2 + 12 u1 u2 v1): unit part 21 at x = 0
    std::size_t N = 10;
    TruncatedSeries u1 = series_exp(N);
    TruncatedSeries v1 = series_fact(N);
    TruncatedSeries u2 = series_sqrt(series_mul(series_mul(u1, u1), u1));
    TruncatedSeries v2 =
        series_mul(series_scale(series_mul(series_mul(u1, u1), v1), Rat(3, 2)), series_inverse(u2));
    TruncatedSeries inner = series_add(
        series_scale(series_mul(series_mul(u1, u1), v2), Rat(6)),
        series_scale(series_mul(series_mul(u1, u2), v1), Rat(12)));
    CHECK(inner[0] == Rat(21));
    CHECK(series_order(series_shift(inner, 5)) == SeriesOrder::exact(5));
}

TEST_CASE("generators") {
    CHECK(series_exp(4) == TruncatedSeries(4, {Rat(1), Rat(1), Rat(1, 2), Rat(1, 6)}));
    CHECK(series_fact(4) == TruncatedSeries(4, {Rat(1), Rat(1), Rat(2), Rat(6)}));
}

TEST_CASE("polynomial conversion commutes with multiplication") {
    auto vt = xy_table({"Y1"});
    std::mt19937 rng(14);
    for (int i = 0; i < 40; ++i) {
        TruncatedSeries a = random_series(8, rng);
        TruncatedSeries b = random_series(8, rng);
        Polynomial pa = poly_from_series(a, vt);
        Polynomial pb = poly_from_series(b, vt);
        CHECK(series_from_poly(pa, 8) == a);
        CHECK(series_from_poly(pa * pb, 8) == series_mul(a, b));
    }
}

TEST_CASE("series expressions") {
    CHECK(eval_series_expr("EXP", 4) == series_exp(4));
    CHECK(eval_series_expr("FACT", 4) == series_fact(4));
    CHECK(eval_series_expr("x^2*(1+x)", 5) ==
          TruncatedSeries(5, {Rat(0), Rat(0), Rat(1), Rat(1), Rat(0)}));
    CHECK(eval_series_expr("inv(1-x)", 4) == TruncatedSeries(4, {Rat(1), Rat(1), Rat(1), Rat(1)}));
    CHECK(eval_series_expr("sqrt(EXP^3)", 6) ==
          series_sqrt(eval_series_expr("EXP^3", 6)));
    CHECK(eval_series_expr("3/2*x", 3) == TruncatedSeries(3, {Rat(0), Rat(3, 2), Rat(0)}));
    CHECK_THROWS_AS(eval_series_expr("inv(x + x^2)", 4), Error);
    CHECK_THROWS_AS(eval_series_expr("1 +", 4), Error);
    CHECK_THROWS_AS(eval_series_expr("foo", 4), Error);
}
