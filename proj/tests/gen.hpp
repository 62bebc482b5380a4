#pragma once

#include <random>
#include <vector>

#include "theme_lab/theme.hpp"
#include "theme_lab/xi.hpp"

/* Hand-rolled generators shared by the unit and acceptance tests. */
namespace gen {

using theme_lab::BSeries;
using theme_lab::Rational;

inline Rational rational(std::mt19937_64& rng, int num = 5, int den = 3)
{
    std::uniform_int_distribution<int> n(-num, num), d(1, den);
    Rational q(n(rng), d(rng));
    q.canonicalize();
    return q;
}

inline Rational nonzero_rational(std::mt19937_64& rng, int num = 5, int den = 3)
{
    for (;;) {
        Rational q = rational(rng, num, den);
        if (sgn(q) != 0) return q;
    }
}

inline BSeries series(std::mt19937_64& rng, int prec)
{
    std::vector<Rational> c;
    for (int i = 0; i < prec; ++i) c.push_back(rational(rng));
    return BSeries(std::move(c), prec);
}

inline BSeries unit(std::mt19937_64& rng, int prec)
{
    BSeries s = series(rng, prec);
    s.set(0, nonzero_rational(rng));
    return s;
}

/* Random lambda_1 > k-1 with denominator 1, 2 or 3. */
inline Rational lambda1(std::mt19937_64& rng, int k)
{
    std::uniform_int_distribution<int> den(1, 3), extra(1, 5);
    int d = den(rng);
    Rational q(static_cast<long>((k - 1) * d + extra(rng)), d);
    q.canonicalize();
    return q;
}

/* S_j = 1 + ... with a nonzero b^{p_j} coefficient and small extra degree. */
inline std::vector<Rational> theme_unit(std::mt19937_64& rng, int pj, int extra = 2)
{
    std::uniform_int_distribution<int> e(0, extra);
    int deg = pj + e(rng);
    std::vector<Rational> c(static_cast<std::size_t>(deg + 1));
    c[0] = 1;
    for (int i = 1; i <= deg; ++i) c[static_cast<std::size_t>(i)] = rational(rng, 3, 2);
    if (pj > 0) c[static_cast<std::size_t>(pj)] = nonzero_rational(rng, 3, 2);
    return c;
}

inline theme_lab::ThemePresentation presentation(std::mt19937_64& rng, int k, int pmax = 2)
{
    std::uniform_int_distribution<int> pd(0, pmax);
    std::vector<Rational> lam{lambda1(rng, k)};
    std::vector<std::vector<Rational>> polys;
    for (int j = 1; j < k; ++j) {
        int pj = pd(rng);
        lam.push_back(lam.back() + pj - 1);
        polys.push_back(theme_unit(rng, pj));
    }
    return theme_lab::ThemePresentation::from_polys(lam, polys);
}

inline theme_lab::XiElement xi(std::mt19937_64& rng, int blocks, int N, int M)
{
    static const Rational keys[] = {Rational(1, 2), Rational(1), Rational(1, 3), Rational(2, 3)};
    theme_lab::XiElement x;
    for (int b = 0; b < blocks && b < 4; ++b) {
        theme_lab::XiBlock blk;
        for (int j = 0; j <= N; ++j) blk.rows.push_back(series(rng, M));
        x.blocks[keys[b]] = blk;
    }
    return x;
}

inline theme_lab::ModElem elem(std::mt19937_64& rng, int k, int M)
{
    theme_lab::ModElem x;
    for (int j = 0; j < k; ++j) x.push_back(series(rng, M));
    return x;
}

}  // namespace gen
