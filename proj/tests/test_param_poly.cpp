#include <random>

#include "doctest.h"
#include "qtails/param_poly.hpp"
#include "test_util.hpp"

using namespace qtails;

TEST_CASE("monomial product")
{
    auto spec = ParamSpec::make({{"b", 2}, {"d", 2}});
    auto b = ParamPoly::variable(spec, "b");
    auto d = ParamPoly::variable(spec, "d");
    auto bd = b * d;
    REQUIRE(bd.terms().size() == 1);
    CHECK(bd.terms()[0].coeff == 1);
    CHECK(spec->exponents(bd.terms()[0].key) == std::vector<int>{1, 1});
    CHECK(spec->monomial_string(bd.terms()[0].key) == "b*d");
}

TEST_CASE("cap drops the square")
{
    auto spec = ParamSpec::make({{"b", 1}});
    auto one = ParamPoly::constant(spec, 1);
    auto b = ParamPoly::variable(spec, "b");
    CHECK((one - b) * (one + b) == one);
}

TEST_CASE("rational addition")
{
    auto spec = ParamSpec::make({{"b", 3}});
    auto half_b = ParamPoly::variable(spec, "b").scaled(Rational(1, 2));
    auto sum = half_b + half_b;
    CHECK(sum == ParamPoly::variable(spec, "b"));
    CHECK(sum.terms()[0].coeff == 1);
}

TEST_CASE("zero coefficients are never stored")
{
    auto spec = ParamSpec::make({{"b", 3}, {"d", 1}});
    auto b = ParamPoly::variable(spec, "b");
    auto diff = b - b;
    CHECK(diff.is_zero());
    CHECK(diff.terms().empty());
}

TEST_CASE("spec mismatch is reported")
{
    auto s1 = ParamSpec::make({{"b", 2}});
    auto s2 = ParamSpec::make({{"d", 2}});
    auto b = ParamPoly::variable(s1, "b");
    auto d = ParamPoly::variable(s2, "d");
    CHECK_THROWS_AS(b + d, SpecMismatchError);
    CHECK_THROWS_AS(b * d, SpecMismatchError);
    CHECK_THROWS_AS(ParamPoly::variable(s1, "z"), SpecError);
}

TEST_CASE("quotient inverse")
{
    auto spec = ParamSpec::make({{"b", 3}});
    auto one = ParamPoly::constant(spec, 1);
    auto b = ParamPoly::variable(spec, "b");
    auto inv = (one - b).inverse();
    CHECK(inv == one + b + b * b + b * b * b);
    CHECK_THROWS_AS(b.inverse(), NotInvertibleError);
}

TEST_CASE("ring laws on random polynomials")
{
    auto spec = ParamSpec::make({{"b", 3}, {"d", 2}, {"z", 2}});
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = testing::random_poly(spec, rng);
        auto y = testing::random_poly(spec, rng);
        auto z = testing::random_poly(spec, rng);
        CHECK((x + y) + z == x + (y + z));
        CHECK(x + y == y + x);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x * ParamPoly::constant(spec, 1) == x);
        const auto xy = x * y;
        for (const auto &t : xy.terms()) {
            CHECK(t.coeff != 0);
        }
    }
}

TEST_CASE("derivative lowers degree")
{
    auto spec = ParamSpec::make({{"b", 3}});
    auto b = ParamPoly::variable(spec, "b");
    auto p = b * b * b.scaled(5);
    CHECK(p.derivative(0) == (b * b).scaled(15));
    CHECK(ParamPoly::constant(spec, 4).derivative(0).is_zero());
}
