#include "theme_lab/series.hpp"

#include <algorithm>
#include <cctype>

#include "theme_lab/errors.hpp"

namespace theme_lab {

Rational parse_rational(const std::string& text)
{
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw InputError("empty rational literal");
    if (t[0] == '+') t.erase(0, 1);
    std::size_t start = (!t.empty() && t[0] == '-') ? 1 : 0;
    auto slash = t.find('/');
    auto digits_ok = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    };
    std::string num = t.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!digits_ok(num) || !digits_ok(den)) throw InputError("malformed rational literal '" + text + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw InputError("zero denominator in '" + text + "'");
    Rational q(start ? -n : n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

BSeries::BSeries() : c_(1) {}

BSeries::BSeries(int precision) : c_(static_cast<std::size_t>(std::max(precision, 1))) {}

BSeries::BSeries(std::vector<Rational> coeffs, int precision) : c_(std::move(coeffs))
{
    c_.resize(static_cast<std::size_t>(std::max(precision, 1)));
}

BSeries BSeries::zero(int precision) { return BSeries(precision); }

BSeries BSeries::constant(const Rational& c, int precision)
{
    BSeries s(precision);
    s.c_[0] = c;
    return s;
}

BSeries BSeries::monomial(int n, const Rational& c, int precision)
{
    BSeries s(precision);
    if (n < s.prec()) s.c_[static_cast<std::size_t>(n)] = c;
    return s;
}

BSeries BSeries::from_strings(const std::vector<std::string>& coeffs, int precision)
{
    std::vector<Rational> c;
    c.reserve(coeffs.size());
    for (const auto& x : coeffs) c.push_back(parse_rational(x));
    return BSeries(std::move(c), precision);
}

Rational BSeries::coeff(int i) const
{
    if (i < 0 || i >= prec()) return 0;
    return c_[static_cast<std::size_t>(i)];
}

void BSeries::set(int i, const Rational& v)
{
    if (i >= 0 && i < prec()) c_[static_cast<std::size_t>(i)] = v;
}

bool BSeries::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Valuation BSeries::valuation() const
{
    for (int i = 0; i < prec(); ++i)
        if (sgn(c_[static_cast<std::size_t>(i)]) != 0) return {i, true};
    return Valuation::at_least(prec());
}

BSeries BSeries::truncated(int precision) const
{
    BSeries r(*this);
    r.c_.resize(static_cast<std::size_t>(std::clamp(precision, 1, prec())));
    return r;
}

BSeries BSeries::shifted(int n) const
{
    BSeries r(prec());
    for (int i = 0; i + n < prec(); ++i) r.c_[static_cast<std::size_t>(i + n)] = c_[static_cast<std::size_t>(i)];
    return r;
}

BSeries BSeries::divided_by_b(int n) const
{
    if (n == 0) return *this;
    if (n >= prec()) throw InsufficientPrecision("division by b^" + std::to_string(n) + " exhausts precision " + std::to_string(prec()));
    for (int i = 0; i < n; ++i)
        if (sgn(c_[static_cast<std::size_t>(i)]) != 0) throw NonUnit("series not divisible by b^" + std::to_string(n));
    return BSeries(std::vector<Rational>(c_.begin() + n, c_.end()), prec() - n);
}

BSeries BSeries::scaled(const Rational& s) const
{
    BSeries r(*this);
    for (auto& x : r.c_) x *= s;
    return r;
}

BSeries BSeries::invert_unit() const
{
    if (sgn(c_[0]) == 0) throw NonUnit("constant term is zero");
    const int m = prec();
    BSeries r(m);
    Rational inv0 = 1 / c_[0];
    r.c_[0] = inv0;
    for (int n = 1; n < m; ++n) {
        Rational acc = 0;
        for (int i = 1; i <= n; ++i) acc += c_[static_cast<std::size_t>(i)] * r.c_[static_cast<std::size_t>(n - i)];
        r.c_[static_cast<std::size_t>(n)] = -acc * inv0;
    }
    return r;
}

BSeries BSeries::derive_b() const
{
    if (prec() < 2) throw InsufficientPrecision("derivative needs precision >= 2");
    BSeries r(prec() - 1);
    for (int i = 0; i + 1 < prec(); ++i) r.c_[static_cast<std::size_t>(i)] = (i + 1) * c_[static_cast<std::size_t>(i + 1)];
    return r;
}

BSeries BSeries::b2_derivative() const
{
    /* b^2 U' keeps the precision of U: coefficient n is (n-1) u_{n-1}. */
    BSeries r(prec());
    for (int n = 2; n < prec(); ++n) r.c_[static_cast<std::size_t>(n)] = (n - 1) * c_[static_cast<std::size_t>(n - 1)];
    return r;
}

BSeries BSeries::exact_div(const BSeries& t) const
{
    Valuation vt = t.valuation();
    if (!vt.exact) throw InsufficientPrecision("division by a series that vanishes at its precision");
    Valuation vs = valuation();
    int m = std::min(prec(), t.prec());
    if (vs.exact && vs.value < vt.value) throw NonUnit("quotient is not a power series");
    BSeries num = truncated(m);
    for (int i = 0; i < std::min(vt.value, m); ++i)
        if (sgn(num.c_[static_cast<std::size_t>(i)]) != 0) throw NonUnit("quotient is not a power series");
    BSeries den = t.truncated(m);
    if (vt.value >= m) throw InsufficientPrecision("divisor valuation reaches precision");
    return num.divided_by_b(vt.value) * den.divided_by_b(vt.value).invert_unit();
}

BSeries& BSeries::operator+=(const BSeries& o)
{
    if (o.prec() < prec()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

BSeries& BSeries::operator-=(const BSeries& o)
{
    if (o.prec() < prec()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

BSeries operator*(const BSeries& a, const BSeries& b)
{
    const int m = std::min(a.prec(), b.prec());
    BSeries r(m);
    for (int i = 0; i < m; ++i) {
        if (sgn(a.c_[static_cast<std::size_t>(i)]) == 0) continue;
        for (int j = 0; i + j < m; ++j) {
            if (sgn(b.c_[static_cast<std::size_t>(j)]) == 0) continue;
            r.c_[static_cast<std::size_t>(i + j)] += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
        }
    }
    return r;
}

bool BSeries::agrees_with(const BSeries& o) const
{
    int m = std::min(prec(), o.prec());
    for (int i = 0; i < m; ++i)
        if (c_[static_cast<std::size_t>(i)] != o.c_[static_cast<std::size_t>(i)]) return false;
    return true;
}

std::string render_poly(const std::vector<Rational>& coeffs, const std::string& var)
{
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Rational& c = coeffs[i];
        if (sgn(c) == 0) continue;
        Rational mag = abs(c);
        if (out.empty())
            out += sgn(c) < 0 ? "-" : "";
        else
            out += sgn(c) < 0 ? " - " : " + ";
        std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
        if (mono.empty())
            out += mag.get_str();
        else if (mag == 1)
            out += mono;
        else
            out += mag.get_str() + "*" + mono;
    }
    return out.empty() ? "0" : out;
}

std::string BSeries::to_string() const { return render_poly(c_, "b"); }

std::string BSeries::to_string_with_order() const
{
    std::string s = to_string();
    std::string o = "O(b^" + std::to_string(prec()) + ")";
    return s == "0" ? o : s + " + " + o;
}

std::vector<std::string> BSeries::to_strings() const
{
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& x : c_) out.push_back(x.get_str());
    return out;
}

BSeries mul(const BSeries& s, const BSeries& t) { return s * t; }
BSeries invert_unit(const BSeries& s) { return s.invert_unit(); }
BSeries derive_b(const BSeries& s) { return s.derive_b(); }
Valuation valuation(const BSeries& s) { return s.valuation(); }

}  // namespace theme_lab
