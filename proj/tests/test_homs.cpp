#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "theme_lab/errors.hpp"
#include "theme_lab/homs.hpp"

using namespace theme_lab;

static ThemeModule rank_one(const Rational& l) { return ThemeModule::from_presentation(ThemePresentation::from_polys({l}, {})); }

/* Hom(E_l, E_m) is spanned by b^{l-m} e when l - m is a nonnegative integer. */
static int rank_one_hom_oracle(const Rational& l, const Rational& m)
{
    Rational d = l - m;
    return d.get_den() == 1 && sgn(d) >= 0 ? 1 : 0;
}

TEST_CASE("rank one morphisms")
{
    const Rational vals[] = {Rational(3, 2), Rational(5, 2), Rational(7, 2), Rational(7, 3), Rational(2)};
    for (const auto& l : vals)
        for (const auto& m : vals) {
            HomSpace hs = hom_space(rank_one(l), rank_one(m));
            CHECK(hs.certified);
            CHECK(hs.dim == rank_one_hom_oracle(l, m));
            if (hs.dim == 1) {
                Rational d = l - m;
                CHECK(hs.basis[0][0].valuation().value == static_cast<int>(d.get_num().get_si()));
            }
        }
}

TEST_CASE("Euler characteristic of random pairs")
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 6; ++trial) {
        ThemeModule A = ThemeModule::from_presentation(gen::presentation(rng, 1 + trial % 2, 1));
        ThemeModule B = ThemeModule::from_presentation(gen::presentation(rng, 1 + (trial / 2) % 2, 1));
        ExtDims d = ext_dims(A, B);
        CHECK(d.certified);
        CHECK(d.ext1 - d.hom == A.rank() * B.rank());
    }
}

TEST_CASE("endomorphisms and stability")
{
    auto notstable = ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2), Rational(5, 2)}, {{1, 2, 1}, {1, 3}});
    StabilityReport s = is_stable(ThemeModule::from_presentation(notstable));
    CHECK(s.certified);
    CHECK_FALSE(s.stable);
    CHECK(s.end_dim == 2);

    /* alpha = beta in the rank three family */
    auto st = ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2), Rational(5, 2)}, {{1, 2, 7}, {1, 2}});
    StabilityReport t = is_stable(ThemeModule::from_presentation(st));
    CHECK(t.certified);
    CHECK(t.stable);
    CHECK(t.end_dim == 3);
    CHECK(t.method_b == Verdict::yes);

    EndInfo info = end_dimension(ThemeModule::from_presentation(st));
    CHECK(info.dim == 3);
    REQUIRE(info.nilpotent);
    CHECK(info.power_ranks.size() >= 1);
}

TEST_CASE("endomorphism images satisfy the module relations")
{
    auto st = ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2)}, {{1, 3}});
    ThemeModule E = ThemeModule::from_presentation(st);
    HomSpace hs = hom_space(E, E);
    REQUIRE(hs.dim == 2);
    for (const auto& y : hs.basis) {
        auto images = endomorphism_images(E, y);
        std::mt19937_64 rng(52);
        ModElem x = gen::elem(rng, 2, E.precision());
        ModElem lhs = apply_endomorphism(images, E.act_a(x));
        ModElem rhs = E.act_a(apply_endomorphism(images, x));
        for (int j = 0; j < 2; ++j) CHECK(lhs[static_cast<std::size_t>(j)].agrees_with(rhs[static_cast<std::size_t>(j)].truncated(E.precision() - 6)));
    }
}

TEST_CASE("injections")
{
    auto A = ThemeModule::from_presentation(ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2)}, {{1, 1}}));
    auto B = ThemeModule::from_presentation(ThemePresentation::from_polys({Rational(7, 2), Rational(7, 2)}, {{1, 1}}));
    InjectionReport ok = injection_exists(B, A);
    CHECK(ok.exists);
    InjectionReport bad = injection_exists(A, B);
    CHECK_FALSE(bad.exists);
    CHECK_FALSE(bad.obstruction.empty());
}

TEST_CASE("endomorphisms of a module with truncated units")
{
    auto p = ThemePresentation::from_polys({Rational(5, 2), Rational(5, 2), Rational(5, 2)}, {{1, 1, 1}, {1, 1}});
    ThemeModule E = ThemeModule::from_presentation(p);
    ThemePresentation q = jordan_holder(realize_in_xi(E)).presentation();
    ThemeModule Eq = ThemeModule::from_presentation(q);
    CHECK(Eq.precision() <= q.units[0].prec());
    HomSpace h = hom_space(Eq, Eq);
    CHECK(h.dim == hom_space(E, E).dim);
}
