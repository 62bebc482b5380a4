#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "theme_lab/series.hpp"

namespace theme_lab {

/*
 * Element of the completed algebra in normal form sum_nu b^nu * P_nu(a),
 * all b's to the left of all a's, truncated at b^b_truncation.
 */
class OpNormal {
public:
    explicit OpNormal(int b_truncation = 16) : trunc_(b_truncation) {}

    static OpNormal gen_a(int b_truncation);
    static OpNormal gen_b(int b_truncation);
    static OpNormal scalar(const Rational& c, int b_truncation);
    static OpNormal from_series(const BSeries& s, int b_truncation);

    int b_truncation() const { return trunc_; }
    /* nu -> coefficients of P_nu in ascending powers of a; no zero polynomials stored. */
    const std::map<int, std::vector<Rational>>& terms() const { return terms_; }
    Rational coeff(int nu, int i) const;
    void add_term(int nu, int i, const Rational& c);
    int a_degree() const;
    bool is_zero() const { return terms_.empty(); }

    OpNormal operator+(const OpNormal& o) const;
    OpNormal operator-(const OpNormal& o) const;
    OpNormal operator*(const OpNormal& o) const;
    OpNormal scaled(const Rational& s) const;
    bool operator==(const OpNormal& o) const { return terms_ == o.terms_; }

    std::string to_string() const;

private:
    OpNormal left_mul_a() const;
    void normalize_entry(int nu);

    int trunc_;
    std::map<int, std::vector<Rational>> terms_;
};

/* P = (a - l1 b) S1^{-1} (a - l2 b) ... S_{k-1}^{-1} (a - lk b). */
struct FactorChain {
    std::vector<Rational> lambdas;
    std::vector<BSeries> units;

    int length() const { return static_cast<int>(lambdas.size()); }
    FactorChain suffix(int j) const;
    FactorChain prefix(int j) const;
    std::string to_string() const;
};

/* Rational polynomial in x with the roots it was built from. */
struct BernsteinPoly {
    std::vector<Rational> coeffs;
    std::vector<Rational> roots;

    std::string to_string() const;
    std::string factored() const;
};

struct BernsteinData {
    OpNormal element;
    BernsteinPoly poly;
};

BernsteinData chain_bernstein(const FactorChain& chain);
BernsteinPoly poly_from_roots(const std::vector<Rational>& roots);

using ParsedOperator = std::variant<FactorChain, OpNormal>;

ParsedOperator parse_operator(const std::string& text, int b_truncation = 16);
OpNormal parse_normal(const std::string& text, int b_truncation = 16);
OpNormal normalize(const std::string& text, int b_truncation = 16);

/*
 * Host modules supply: Elem, act_a, act_b, mul_series, sub, add, scale.
 */
template <class Host>
typename Host::Elem apply_chain(const FactorChain& chain, const typename Host::Elem& x, const Host& host)
{
    typename Host::Elem y = x;
    for (int j = chain.length() - 1; j >= 0; --j) {
        y = host.sub(host.act_a(y), host.scale(chain.lambdas[static_cast<std::size_t>(j)], host.act_b(y)));
        if (j > 0) y = host.mul_series(chain.units[static_cast<std::size_t>(j - 1)].invert_unit(), y);
    }
    return y;
}

template <class Host>
typename Host::Elem apply_normal(const OpNormal& op, const typename Host::Elem& x, const Host& host)
{
    std::vector<typename Host::Elem> powers{x};
    int deg = op.a_degree();
    for (int i = 1; i <= deg; ++i) powers.push_back(host.act_a(powers.back()));
    typename Host::Elem acc = host.scale(0, x);
    for (const auto& [nu, poly] : op.terms()) {
        typename Host::Elem part = host.scale(0, x);
        for (std::size_t i = 0; i < poly.size(); ++i)
            if (sgn(poly[i]) != 0) part = host.add(part, host.scale(poly[i], powers[i]));
        for (int n = 0; n < nu; ++n) part = host.act_b(part);
        acc = host.add(acc, part);
    }
    return acc;
}

/* The rank-one module E_lambda with generator e; elements are series U (meaning U e). */
struct RankOneHost {
    using Elem = BSeries;
    Rational lambda;

    BSeries act_a(const BSeries& u) const { return u.shifted(1).scaled(lambda) + u.b2_derivative(); }
    BSeries act_b(const BSeries& u) const { return u.shifted(1); }
    BSeries mul_series(const BSeries& s, const BSeries& u) const { return s * u; }
    BSeries sub(const BSeries& x, const BSeries& y) const { return x - y; }
    BSeries add(const BSeries& x, const BSeries& y) const { return x + y; }
    BSeries scale(const Rational& q, const BSeries& u) const { return u.scaled(q); }
};

}  // namespace theme_lab
