#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "theme_lab/errors.hpp"
#include "theme_lab/theme.hpp"

using namespace theme_lab;

static ThemePresentation pres3()
{
    return ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2), Rational(5, 2)}, {{1, 2, 1}, {1, 3}});
}

TEST_CASE("invariants and validation")
{
    FundInvariants inv{Rational(7, 2), {2, 3, 2}};
    CHECK(inv.lambdas() == std::vector<Rational>{Rational(7, 2), Rational(9, 2), Rational(13, 2), Rational(15, 2)});
    CHECK(pres3().invariants() == FundInvariants{Rational(5, 2), {1, 1}});
    CHECK_THROWS_AS(ThemePresentation::from_polys({Rational(1, 2), Rational(1, 2)}, {{1}}).validate(), InvalidInvariants);
    CHECK_THROWS_AS(ThemePresentation::from_polys({Rational(5, 2), Rational(3)}, {{1}}).validate(), InvalidInvariants);
    CHECK_THROWS_AS(ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2)}, {{2, 1}}).validate(), InvalidInvariants);
}

TEST_CASE("module relation on random elements")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        ThemeModule E = ThemeModule::from_presentation(gen::presentation(rng, 1 + trial % 4));
        ModElem x = gen::elem(rng, E.rank(), E.precision());
        ModElem lhs = E.sub(E.act_a(E.act_b(x)), E.act_b(E.act_a(x)));
        CHECK(lhs == E.act_b(E.act_b(x)));
    }
}

TEST_CASE("the presentation kills the generator")
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 12; ++trial) {
        ThemeModule E = ThemeModule::from_presentation(gen::presentation(rng, 1 + trial % 4));
        ModElem y = apply_chain(E.chain(), E.basis(E.rank()), E);
        for (const auto& c : y) CHECK(c.is_zero());
        XiElement phi = realize_in_xi(E);
        CHECK(apply_chain(E.chain(), phi, XiHost{}).is_zero());
        CHECK(phi.log_degree() == E.rank() - 1);
    }
}

TEST_CASE("Jordan-Holder recovers the presentation")
{
    ThemeModule E = ThemeModule::from_presentation(pres3());
    JHFiltration jh = jordan_holder(realize_in_xi(E));
    CHECK(jh.certified);
    CHECK(jh.invariants() == E.presentation().invariants());
    CHECK(jh.presentation() == E.presentation());
    CHECK(jh.F.size() == 3);
    CHECK(fundamental_invariants_checked(E) == E.presentation().invariants());
}

TEST_CASE("a vanishing b^p coefficient is not a theme")
{
    auto p = ThemePresentation::from_polys({Rational(5, 2), Rational(7, 2)}, {{1, 0, 0, 4}});
    CHECK_THROWS_AS(realize_in_xi(ThemeModule::from_presentation(p)), NotATheme);
}

TEST_CASE("twists shift every exponent")
{
    ThemeModule E = ThemeModule::from_presentation(pres3());
    ThemeModule T = twist_or_dual(E, 2, TwistMode::twist);
    CHECK(T.presentation().lambdas == std::vector<Rational>{Rational(9, 2), Rational(9, 2), Rational(9, 2)});
    ThemeModule D = twist_or_dual(E, 6, TwistMode::dual_twist);
    CHECK(D.presentation().lambdas == std::vector<Rational>{Rational(7, 2), Rational(7, 2), Rational(7, 2)});
    CHECK_THROWS_AS(twist_or_dual(E, 3, TwistMode::dual_twist), ShiftTooSmall);
}

TEST_CASE("quotients and subs along the filtration")
{
    ThemeModule E = ThemeModule::from_presentation(pres3());
    ThemeModule Q = quotient_by_F(E, 1);
    CHECK(Q.rank() == 2);
    CHECK(Q.presentation().units[0].coeff(1) == 3);
    ThemeModule F = sub_F(E, 2);
    CHECK(F.rank() == 2);
    CHECK(F.presentation().units[0].coeff(2) == 1);
}

TEST_CASE("Bernstein polynomial")
{
    BernsteinData bd = bernstein(ThemeModule::from_presentation(pres3()));
    CHECK(bd.poly.roots == std::vector<Rational>{Rational(-1, 2), Rational(-3, 2), Rational(-5, 2)});
}

TEST_CASE("full dual agrees with the dual twist on a rank two sample")
{
    auto p = ThemePresentation::from_polys({Rational(3, 2), Rational(3, 2)}, {{1, 2}});
    ThemeModule E = ThemeModule::from_presentation(p);
    FullDual fd = full_dual(E, 4);
    ThemeModule D = twist_or_dual(E, 4, TwistMode::dual_twist);
    CHECK(fd.invariants_from_roots == D.presentation().invariants());
    CHECK(fd.presentation.invariants() == D.presentation().invariants());
}

TEST_CASE("exponent decomposition of a two block element")
{
    ThemeModule A = ThemeModule::from_presentation(ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2)}, {{1, 1}}));
    ThemeModule B = ThemeModule::from_presentation(ThemePresentation::from_polys({Rational(7, 3)}, {}));
    XiElement phi = realize_in_xi(A, 20) + realize_in_xi(B, 20);
    ExpDecomposition d = exp_decompose(phi);
    CHECK(d.certified);
    CHECK(d.rank == 3);
    REQUIRE(d.classes.size() == 2);
    int total = 0;
    for (const auto& c : d.classes) total += c.coprimitive_rank;
    CHECK(total == d.rank);
}

TEST_CASE("descent survives large exponents above the class")
{
    auto p = ThemePresentation::from_polys({8, 8, 8, 7}, {{1, Rational(-3, 2)}, {1, 2, -1}, {1, Rational(-3, 2), -1}});
    ThemeModule E = ThemeModule::from_presentation(p);
    JHFiltration jh = jordan_holder(realize_in_xi(E));
    CHECK(jh.certified);
    CHECK(jh.invariants() == p.invariants());
}
