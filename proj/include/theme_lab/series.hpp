#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace theme_lab {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/* b-adic valuation: either an exact integer or "at least the precision". */
struct Valuation {
    int value = 0;
    bool exact = true;

    static Valuation at_least(int m) { return {m, false}; }
    bool operator==(const Valuation&) const = default;
};

/*
 * Truncated power series in b with rational coefficients.
 * The series is known modulo b^prec; coefficient i is stored at index i.
 */
class BSeries {
public:
    BSeries();
    explicit BSeries(int precision);
    BSeries(std::vector<Rational> coeffs, int precision);

    static BSeries zero(int precision);
    static BSeries constant(const Rational& c, int precision);
    static BSeries one(int precision) { return constant(1, precision); }
    static BSeries monomial(int n, const Rational& c, int precision);
    static BSeries from_strings(const std::vector<std::string>& coeffs, int precision);

    int prec() const { return static_cast<int>(c_.size()); }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Rational coeff(int i) const;
    void set(int i, const Rational& v);

    bool is_zero() const;
    bool is_unit() const { return sgn(c_[0]) != 0; }
    Valuation valuation() const;

    BSeries truncated(int precision) const;
    BSeries shifted(int n) const;
    BSeries divided_by_b(int n) const;
    BSeries scaled(const Rational& s) const;

    BSeries invert_unit() const;
    BSeries derive_b() const;
    BSeries b2_derivative() const;
    BSeries exact_div(const BSeries& t) const;

    BSeries& operator+=(const BSeries& o);
    BSeries& operator-=(const BSeries& o);
    friend BSeries operator+(BSeries a, const BSeries& b) { return a += b; }
    friend BSeries operator-(BSeries a, const BSeries& b) { return a -= b; }
    friend BSeries operator-(const BSeries& a) { return a.scaled(-1); }
    friend BSeries operator*(const BSeries& a, const BSeries& b);
    friend BSeries operator*(const Rational& s, const BSeries& a) { return a.scaled(s); }

    bool operator==(const BSeries& o) const { return c_ == o.c_; }
    bool agrees_with(const BSeries& o) const;

    std::string to_string() const;
    std::string to_string_with_order() const;
    std::vector<std::string> to_strings() const;

private:
    std::vector<Rational> c_;
};

BSeries mul(const BSeries& s, const BSeries& t);
BSeries invert_unit(const BSeries& s);
BSeries derive_b(const BSeries& s);
Valuation valuation(const BSeries& s);

/* Renders c*b^n terms; used by several pretty printers. */
std::string render_poly(const std::vector<Rational>& coeffs, const std::string& var);

}  // namespace theme_lab
