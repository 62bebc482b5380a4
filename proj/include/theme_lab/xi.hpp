#pragma once

#include <map>
#include <string>
#include <vector>

#include "theme_lab/elim.hpp"
#include "theme_lab/series.hpp"

namespace theme_lab {

/* Rows j = 0..N of one block; row j is the series multiplying e_{lambda,j}. */
struct XiBlock {
    std::vector<BSeries> rows;

    int N() const { return static_cast<int>(rows.size()) - 1; }
    int M() const;
    Rational cell(int j, int m) const;
};

/*
 * Element of Xi: sum over blocks lambda in (0,1] of sum_j U_j(b) e_{lambda,j},
 * where e_{lambda,j} = s^{lambda-1} (Log s)^j / j!.
 */
struct XiElement {
    std::map<Rational, XiBlock> blocks;

    static XiElement basis(const Rational& lambda, int j, int m, int N, int M);
    static XiElement zero(const Rational& lambda, int N, int M);

    int log_degree() const;
    int precision() const;
    bool is_zero() const;
    const XiBlock& block(const Rational& lambda) const;
    XiElement project(const Rational& lambda) const;
    XiElement truncated(int M) const;

    bool operator==(const XiElement& o) const;
};

void check_block_key(const Rational& lambda);
/* Reduces an exponent to its class representative in (0,1]. */
Rational class_of(const Rational& lambda);

XiElement operator+(const XiElement& x, const XiElement& y);
XiElement operator-(const XiElement& x, const XiElement& y);
XiElement operator*(const Rational& s, const XiElement& x);
XiElement operator*(const BSeries& s, const XiElement& x);

XiElement act_a(const XiElement& x);
XiElement act_b(const XiElement& x);
XiElement f_shift(const XiElement& x, const Rational& lambda);
XiElement solve_affine(const XiElement& z, int q, int j);

struct SpanBasis {
    struct Position {
        Rational block;
        int j;
    };
    std::vector<Position> positions;
    Elimination elim;

    int rank() const { return elim.rank(); }
    bool certified() const { return elim.certified; }
    std::vector<int> divisor_valuations() const { return elim.divisor_valuations(); }
    /* pivot positions as (block, j, m) */
    struct Pivot {
        Rational block;
        int j;
        int m;
    };
    std::vector<Pivot> pivots() const;
};

SpanBasis span_rank(const std::vector<XiElement>& gens, int margin = 4);
Verdict membership(const XiElement& y, const SpanBasis& basis);

/* Generators x, a x, ..., a^{count-1} x. */
std::vector<XiElement> a_orbit(const XiElement& x, int count);

/* Coefficient grids over monomials s^{lambda-1+m} (Log s)^j / j!. */
enum class MonomialDirection { to_monomial, from_monomial };
XiElement monomial_convert(const XiElement& x, MonomialDirection direction);
std::string render_monomial(const XiElement& x);

struct XiHost {
    using Elem = XiElement;
    XiElement act_a(const XiElement& x) const { return theme_lab::act_a(x); }
    XiElement act_b(const XiElement& x) const { return theme_lab::act_b(x); }
    XiElement mul_series(const BSeries& s, const XiElement& x) const { return s * x; }
    XiElement sub(const XiElement& x, const XiElement& y) const { return x - y; }
    XiElement add(const XiElement& x, const XiElement& y) const { return x + y; }
    XiElement scale(const Rational& q, const XiElement& x) const { return q * x; }
};

}  // namespace theme_lab
