#include <random>

#include "doctest.h"
#include "qtails/qfunctions.hpp"
#include "qtails/series.hpp"
#include "test_util.hpp"

using namespace qtails;
using testing::coeffs;
using testing::ints;

namespace {

SpecPtr bd(int cb, int cd) { return ParamSpec::make({{"b", cb}, {"d", cd}}); }

} // namespace

TEST_CASE("telescoping geometric series")
{
    SeriesContext ctx(10, ParamSpec::none());
    std::vector<Rational> ones(11, Rational(1));
    auto geo = ctx.from_coefficients(ones);
    auto one_minus_q = ctx.one() - ctx.q_power(1);
    auto prod = one_minus_q * geo;
    CHECK(equal_upto(prod, ctx.one(), 10) == std::nullopt);
}

TEST_CASE("shift and hand expansions")
{
    SeriesContext ctx(5, ParamSpec::none());
    auto inv_q = shift(ctx.one(), -1);
    CHECK(inv_q.lo() == -1);
    CHECK(inv_q.constant_coeff(-1) == 1);
    CHECK(inv_q.constant_coeff(0) == 0);

    auto a = ctx.one() - ctx.q_power(1);
    auto b = ctx.one() - ctx.q_power(2);
    CHECK(coeffs(a * b, 0, 5) == ints({1, -1, -1, 1, 0, 0}));
}

TEST_CASE("laurent floor is enforced")
{
    SeriesContext ctx(5, ParamSpec::none(), -3);
    CHECK_NOTHROW(shift(ctx.one(), -3));
    CHECK_THROWS_AS(shift(ctx.one(), -4), LaurentFloorError);
}

TEST_CASE("inverse examples")
{
    SeriesContext ctx(4, ParamSpec::none());
    auto inv = inverse(ctx.one() - ctx.q_power(1));
    CHECK(coeffs(inv, 0, 4) == ints({1, 1, 1, 1, 1}));

    SeriesContext cb(4, ParamSpec::make({{"b", 3}}));
    auto ib = inverse(cb.one() - cb.param("b"));
    auto b = ParamPoly::variable(cb.spec(), "b");
    auto one = ParamPoly::constant(cb.spec(), 1);
    CHECK(ib.coeff(0) == one + b + b * b + b * b * b);
    CHECK(ib.coeff(1).is_zero());

    CHECK_THROWS_AS(inverse(cb.param("b")), NotInvertibleError);
}

TEST_CASE("inverse of a Laurent leading term")
{
    SeriesContext ctx(6, ParamSpec::none());
    auto s = shift(ctx.one() + ctx.q_power(1), -2); // q^-2 + q^-1
    auto inv = inverse(s);
    CHECK(inv.lo() == 2);
    auto prod = s * inv;
    CHECK(equal_upto(prod, ctx.one(), prod.hi()) == std::nullopt);
}

TEST_CASE("inverse with a nilpotent Laurent part")
{
    // 1 - d q^-2 has no unit at its lowest exponent but is a unit in the
    // capped quotient ring.
    SeriesContext ctx(8, ParamSpec::make({{"d", 3}}));
    auto s = ctx.one() - ctx.monomial(ctx.mono(1, -2, {{"d", 1}}));
    auto inv = inverse(s);
    auto d = ParamPoly::variable(ctx.spec(), "d");
    // 1 + d q^-2 + d^2 q^-4 + d^3 q^-6
    CHECK(inv.coeff(-6) == d * d * d);
    CHECK(inv.coeff(-4) == d * d);
    CHECK(inv.coeff(-2) == d);
    CHECK(inv.constant_coeff(0) == 1);
    auto prod = s * inv;
    CHECK(equal_upto(prod, ctx.one(), std::min(prod.hi(), 8)) == std::nullopt);
}

TEST_CASE("parameter derivative")
{
    SeriesContext ctx(5, ParamSpec::make({{"b", 3}}));
    auto s = ctx.monomial(ctx.mono(1, 3, {{"b", 2}}));
    auto ds = derivative(s, "b");
    auto b = ParamPoly::variable(ctx.spec(), "b");
    CHECK(ds.coeff(3) == b.scaled(2));
    CHECK(derivative(ctx.q_power(2, 7), "b").is_zero());
    CHECK_THROWS_AS(derivative(s, "z"), SpecError);
}

TEST_CASE("derivative then substitution")
{
    // d/db (1-b)(1-bq) = -(1-bq) - q(1-b); at b = q this is
    // -(1-q^2) - q(1-q) = -1 - q + 2q^2.
    SeriesContext ctx(2, ParamSpec::make({{"b", 2}}));
    auto p = mul_one_minus(mul_one_minus(ctx.one(), ctx.mono(1, 0, {{"b", 1}})), ctx.mono(1, 1, {{"b", 1}}));
    auto r = substitute(derivative(p, "b"), "b", 1, 1);
    CHECK(coeffs(r, 0, 2) == ints({-1, -1, 2}));
}

TEST_CASE("substitution")
{
    SeriesContext ctx(6, bd(2, 2));
    auto s = ctx.one() - ctx.param("b");
    CHECK(equal_upto(substitute(s, "b", 1, 1), ctx.one() - ctx.q_power(1), 6) == std::nullopt);

    auto sd = ctx.one() + ctx.param("d") * ctx.q_power(2) + ctx.param("b");
    auto zeroed = substitute(sd, "d", 0, 0);
    for (int n = zeroed.lo(); n <= zeroed.hi(); ++n) {
        const ParamPoly c = zeroed.coeff(n);
        for (const auto &t : c.terms()) {
            CHECK(ctx.spec()->exponent(t.key, 1) == 0);
        }
    }

    // (b/q; q)_m at b = q contains the factor 1 - 1. This needs m <= cap(b):
    // once b^m is truncated the substitution no longer sees the cancellation.
    for (int m = 1; m <= 2; ++m) {
        auto poch = pochhammer_finite(ctx.mono(1, -1, {{"b", 1}}), m, 1, ctx);
        CHECK(substitute(poch, "b", 1, 1).is_zero());
    }
}

TEST_CASE("negative substitution shrinks the window")
{
    SeriesContext ctx(6, ParamSpec::make({{"b", 2}}));
    auto s = ctx.one() + ctx.param("b");
    auto r = substitute(s, "b", 1, -1);
    CHECK(r.hi() == 4);
    CHECK(r.lo() == -1);
    CHECK_THROWS_AS(substitute(s, "b", 1, -10), EmptyWindowError);
}

TEST_CASE("equal_upto reports the first mismatch")
{
    SeriesContext ctx(10, bd(2, 2));
    auto a = ctx.one() - ctx.q_power(1);
    auto b = a + ctx.q_power(5);
    CHECK(equal_upto(a, a, 10) == std::nullopt);
    auto mm = equal_upto(a, b, 10);
    REQUIRE(mm);
    CHECK(mm->q_order == 5);
    CHECK(mm->lhs == 0);
    CHECK(mm->rhs == 1);

    // Within one q-order the lexicographically smallest monomial wins.
    auto c = a + ctx.param("d") * ctx.q_power(3) + ctx.param("b") * ctx.q_power(3);
    auto m2 = equal_upto(a, c, 10);
    REQUIRE(m2);
    CHECK(m2->q_order == 3);
    CHECK(m2->exponents == std::vector<int>{0, 1});
    CHECK(m2->monomial == "d");

    CHECK_THROWS_AS(equal_upto(a, a.truncated(4), 5), WindowError);
}

TEST_CASE("ring laws and inversion on random series")
{
    SeriesContext ctx(8, bd(2, 2));
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto x = testing::random_series(ctx, rng, -2);
        auto y = testing::random_series(ctx, rng, 0);
        auto z = testing::random_series(ctx, rng, 1);
        auto n = std::min({(x * y * z).hi(), ctx.order() - 4});
        CHECK(equal_upto((x + y) + z, x + (y + z), n) == std::nullopt);
        CHECK(equal_upto(x * y, y * x, n) == std::nullopt);
        CHECK(equal_upto((x * y) * z, x * (y * z), n) == std::nullopt);
        CHECK(equal_upto(x * (y + z), x * y + x * z, n) == std::nullopt);
        CHECK(equal_upto(x * ctx.one(), x, std::min(x.hi(), n)) == std::nullopt);

        // A unit: 1 + (parameter-free q-part) + anything at positive order.
        auto u = ctx.one() + shift(y, 1);
        auto prod = u * inverse(u);
        CHECK(equal_upto(prod, ctx.one(), prod.hi()) == std::nullopt);

        for (const auto &s : {x * y, x + z, inverse(u)}) {
            CHECK(s.coeff(s.lo()).is_zero() == s.is_zero());
            for (const auto &p : s.coeffs()) {
                for (const auto &t : p.terms()) {
                    CHECK(t.coeff != 0);
                    CHECK(t.key < ctx.spec()->box_size());
                }
            }
        }
    }
}

TEST_CASE("cap truncation is a ring homomorphism")
{
    SeriesContext big(8, bd(3, 3));
    auto small = bd(1, 2);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = testing::random_series(big, rng, 0);
        auto y = testing::random_series(big, rng, -1);
        auto lhs = recap(x * y, small);
        auto rhs = recap(x, small) * recap(y, small);
        CHECK(equal_upto(lhs, rhs, std::min(lhs.hi(), rhs.hi())) == std::nullopt);
        auto sl = recap(x + y, small);
        auto sr = recap(x, small) + recap(y, small);
        CHECK(equal_upto(sl, sr, 8) == std::nullopt);
    }
}

TEST_CASE("coefficients above the window are refused")
{
    SeriesContext ctx(3, ParamSpec::none());
    CHECK_THROWS_AS(ctx.one().coeff(4), WindowError);
    CHECK(ctx.one().constant_coeff(-7) == 0);
}

TEST_CASE("fast factor helpers agree with generic arithmetic")
{
    SeriesContext ctx(12, bd(3, 3));
    std::mt19937 rng(3);
    auto x = testing::random_series(ctx, rng, 0);
    for (const auto &m : {ctx.mono(1, 1, {{"b", 1}}), ctx.mono(-2, 3), ctx.mono(1, -1, {{"d", 1}}),
                          ctx.mono(Rational(1, 3), 0), ctx.mono(1, 0, {{"b", 1}, {"d", 1}})}) {
        auto generic_mul = x * (ctx.one() - ctx.monomial(m));
        auto fast_mul = mul_one_minus(x, m);
        auto n = std::min(generic_mul.hi(), fast_mul.hi());
        CHECK(equal_upto(generic_mul, fast_mul, n) == std::nullopt);

        auto generic_div = x * inverse(ctx.one() - ctx.monomial(m));
        auto fast_div = div_one_minus(x, m);
        auto nd = std::min(generic_div.hi(), fast_div.hi());
        CHECK(nd >= 0);
        CHECK(equal_upto(generic_div, fast_div, nd) == std::nullopt);
    }
}
