#include "theme_lab/xi.hpp"

#include <algorithm>
#include <limits>

#include "theme_lab/errors.hpp"

namespace theme_lab {

int XiBlock::M() const
{
    int m = std::numeric_limits<int>::max();
    for (const auto& r : rows) m = std::min(m, r.prec());
    return rows.empty() ? 1 : m;
}

Rational XiBlock::cell(int j, int m) const
{
    if (j < 0 || j > N()) return 0;
    return rows[static_cast<std::size_t>(j)].coeff(m);
}

static void normalize_block(XiBlock& b)
{
    int m = b.M();
    for (auto& r : b.rows) r = r.truncated(m);
}

void check_block_key(const Rational& lambda)
{
    if (sgn(lambda) <= 0 || lambda > 1) throw UnknownBlock("block key " + lambda.get_str() + " is not in (0,1]");
}

Rational class_of(const Rational& lambda)
{
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), lambda.get_num_mpz_t(), lambda.get_den_mpz_t());
    Rational r = lambda - Rational(fl);
    if (sgn(r) == 0) r = 1;
    r.canonicalize();
    return r;
}

XiElement XiElement::zero(const Rational& lambda, int N, int M)
{
    check_block_key(lambda);
    XiElement x;
    x.blocks[lambda].rows.assign(static_cast<std::size_t>(N + 1), BSeries::zero(M));
    return x;
}

XiElement XiElement::basis(const Rational& lambda, int j, int m, int N, int M)
{
    XiElement x = zero(lambda, std::max(N, j), M);
    x.blocks[lambda].rows[static_cast<std::size_t>(j)].set(m, 1);
    return x;
}

int XiElement::log_degree() const
{
    int d = -1;
    for (const auto& [k, b] : blocks)
        for (int j = b.N(); j >= 0; --j)
            if (!b.rows[static_cast<std::size_t>(j)].is_zero()) {
                d = std::max(d, j);
                break;
            }
    return d;
}

int XiElement::precision() const
{
    int m = std::numeric_limits<int>::max();
    for (const auto& [k, b] : blocks) m = std::min(m, b.M());
    return m;
}

bool XiElement::is_zero() const
{
    for (const auto& [k, b] : blocks)
        for (const auto& r : b.rows)
            if (!r.is_zero()) return false;
    return true;
}

const XiBlock& XiElement::block(const Rational& lambda) const
{
    auto it = blocks.find(lambda);
    if (it == blocks.end()) throw UnknownBlock("element has no block " + lambda.get_str());
    return it->second;
}

XiElement XiElement::project(const Rational& lambda) const
{
    XiElement r;
    auto it = blocks.find(lambda);
    if (it != blocks.end()) r.blocks[lambda] = it->second;
    return r;
}

XiElement XiElement::truncated(int M) const
{
    XiElement r = *this;
    for (auto& [k, b] : r.blocks)
        for (auto& row : b.rows) row = row.truncated(M);
    return r;
}

bool XiElement::operator==(const XiElement& o) const
{
    if (blocks.size() != o.blocks.size()) return false;
    for (const auto& [k, b] : blocks) {
        auto it = o.blocks.find(k);
        if (it == o.blocks.end() || it->second.rows != b.rows) return false;
    }
    return true;
}

static XiElement combine(const XiElement& x, const XiElement& y, const Rational& sy)
{
    XiElement r = x;
    for (const auto& [k, by] : y.blocks) {
        auto it = r.blocks.find(k);
        if (it == r.blocks.end()) {
            XiBlock nb = by;
            for (auto& row : nb.rows) row = row.scaled(sy);
            r.blocks[k] = std::move(nb);
            continue;
        }
        XiBlock& bx = it->second;
        int m = std::min(bx.M(), by.M());
        std::size_t n = std::max(bx.rows.size(), by.rows.size());
        bx.rows.resize(n, BSeries::zero(m));
        for (std::size_t j = 0; j < n; ++j) {
            bx.rows[j] = bx.rows[j].truncated(m);
            if (j < by.rows.size()) bx.rows[j] += by.rows[j].scaled(sy);
        }
        normalize_block(bx);
    }
    return r;
}

XiElement operator+(const XiElement& x, const XiElement& y) { return combine(x, y, 1); }
XiElement operator-(const XiElement& x, const XiElement& y) { return combine(x, y, -1); }

XiElement operator*(const Rational& s, const XiElement& x)
{
    XiElement r = x;
    for (auto& [k, b] : r.blocks)
        for (auto& row : b.rows) row = row.scaled(s);
    return r;
}

XiElement operator*(const BSeries& s, const XiElement& x)
{
    XiElement r = x;
    for (auto& [k, b] : r.blocks) {
        for (auto& row : b.rows) row = s * row;
        normalize_block(b);
    }
    return r;
}

/* a(b^m e_j) = (lambda+m) b^{m+1} e_j + b^{m+1} e_{j-1}; result truncated at M-1. */
XiElement act_a(const XiElement& x)
{
    XiElement r;
    for (const auto& [lam, b] : x.blocks) {
        int M = b.M();
        if (M < 2) throw InsufficientPrecision("a-action needs precision >= 2");
        XiBlock nb;
        nb.rows.assign(b.rows.size(), BSeries::zero(M - 1));
        for (int h = 0; h <= b.N(); ++h)
            for (int m = 0; m + 1 < M - 1; ++m) {
                Rational v = (lam + m) * b.cell(h, m) + b.cell(h + 1, m);
                nb.rows[static_cast<std::size_t>(h)].set(m + 1, v);
            }
        r.blocks[lam] = std::move(nb);
    }
    return r;
}

XiElement act_b(const XiElement& x)
{
    XiElement r;
    for (const auto& [lam, b] : x.blocks) {
        int M = b.M();
        if (M < 2) throw InsufficientPrecision("b-action needs precision >= 2");
        XiBlock nb;
        for (const auto& row : b.rows) nb.rows.push_back(row.truncated(M - 1).shifted(1));
        r.blocks[lam] = std::move(nb);
    }
    return r;
}

XiElement f_shift(const XiElement& x, const Rational& lambda)
{
    check_block_key(lambda);
    XiElement r = x;
    auto it = r.blocks.find(lambda);
    if (it == r.blocks.end()) return r;
    auto& rows = it->second.rows;
    int M = it->second.M();
    for (std::size_t h = 0; h + 1 < rows.size(); ++h) rows[h] = rows[h + 1];
    rows.back() = BSeries::zero(M);
    return r;
}

XiElement solve_affine(const XiElement& z, int q, int j)
{
    if (z.blocks.size() != 1) throw InputError("solve_affine expects a single-block element");
    if (q < 0 || j < 0) throw InputError("solve_affine expects q >= 0 and j >= 0");
    const auto& [lam, zb] = *z.blocks.begin();
    const int M = zb.M();
    for (int h = j + 1; h <= zb.N(); ++h)
        if (!zb.rows[static_cast<std::size_t>(h)].is_zero()) throw DegreeOverflow("Log-degree exceeds " + std::to_string(j));
    for (int h = 0; h <= std::min(j, zb.N()); ++h)
        if (sgn(zb.cell(h, 0)) != 0) throw NotIntegrable("valuation-0 component in Log-degree " + std::to_string(h));
    if (q + 1 >= M) throw InsufficientPrecision("b^" + std::to_string(q + 1) + " lies beyond precision " + std::to_string(M));

    const int out_m = M - 1;
    std::vector<std::vector<Rational>> y(static_cast<std::size_t>(j + 2), std::vector<Rational>(static_cast<std::size_t>(out_m)));
    y[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(q)] = zb.cell(j, q + 1);
    for (int h = j; h >= 0; --h)
        for (int m = 0; m < out_m; ++m) {
            Rational v;
            if (m == q)
                v = h >= 1 ? zb.cell(h - 1, q + 1) : Rational(0);
            else
                v = (zb.cell(h, m + 1) - y[static_cast<std::size_t>(h + 1)][static_cast<std::size_t>(m)]) / Rational(m - q);
            y[static_cast<std::size_t>(h)][static_cast<std::size_t>(m)] = v;
        }
    XiElement r;
    XiBlock& b = r.blocks[lam];
    for (auto& row : y) b.rows.emplace_back(std::move(row), out_m);
    return r;
}

/* ---------- span and membership ---------- */

std::vector<SpanBasis::Pivot> SpanBasis::pivots() const
{
    std::vector<Pivot> out;
    for (const auto& p : elim.pivots) {
        const auto& pos = positions[static_cast<std::size_t>(p.column)];
        out.push_back({pos.block, pos.j, p.valuation});
    }
    return out;
}

static SeriesRow flatten(const XiElement& x, const std::vector<SpanBasis::Position>& pos, int fallback_prec)
{
    SeriesRow row;
    int prec = x.blocks.empty() ? fallback_prec : x.precision();
    for (const auto& p : pos) {
        auto it = x.blocks.find(p.block);
        if (it != x.blocks.end() && p.j <= it->second.N())
            row.push_back(it->second.rows[static_cast<std::size_t>(p.j)]);
        else
            row.push_back(BSeries::zero(prec));
    }
    return row;
}

SpanBasis span_rank(const std::vector<XiElement>& gens, int margin)
{
    SpanBasis sb;
    std::map<Rational, int> maxj;
    int fallback = 1;
    for (const auto& g : gens) {
        for (const auto& [k, b] : g.blocks) maxj[k] = std::max(maxj[k], b.N());
        if (!g.blocks.empty()) fallback = std::max(fallback, g.precision());
    }
    for (const auto& [k, n] : maxj)
        for (int j = n; j >= 0; --j) sb.positions.push_back({k, j});
    std::vector<int> order(sb.positions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<SeriesRow> rows;
    for (const auto& g : gens) rows.push_back(flatten(g, sb.positions, fallback));
    sb.elim = eliminate(std::move(rows), order, margin);
    return sb;
}

Verdict membership(const XiElement& y, const SpanBasis& basis)
{
    const int limit = basis.elim.input_precision - basis.elim.margin;
    bool near = false;
    for (const auto& [k, b] : y.blocks)
        for (int j = 0; j <= b.N(); ++j) {
            bool known = std::any_of(basis.positions.begin(), basis.positions.end(),
                                     [&](const SpanBasis::Position& p) { return p.block == k && p.j == j; });
            if (known) continue;
            Valuation v = b.rows[static_cast<std::size_t>(j)].valuation();
            if (v.exact) {
                if (v.value < limit) return Verdict::no;
                near = true;
            }
        }
    Verdict v = reduce_membership(basis.elim, flatten(y, basis.positions, y.precision()));
    if (v == Verdict::yes && near) return Verdict::uncertain;
    return v;
}

std::vector<XiElement> a_orbit(const XiElement& x, int count)
{
    std::vector<XiElement> out;
    if (count <= 0) return out;
    out.push_back(x);
    for (int i = 1; i < count; ++i) out.push_back(act_a(out.back()));
    return out;
}

/* ---------- monomial form ---------- */

using Grid = std::vector<std::vector<Rational>>;

/* b acting on monomial cells: b(s^{mu-1} L_j) = sum_i (-1)^i mu^{-(i+1)} s^mu L_{j-i}. */
static Grid integrate_monomial(const Grid& g, const Rational& lam)
{
    const std::size_t n = g.size(), M = g[0].size();
    Grid r(n, std::vector<Rational>(M));
    for (std::size_t m = 0; m + 1 < M; ++m) {
        Rational mu = lam + static_cast<long>(m);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(g[j][m]) == 0) continue;
            Rational f = 1 / mu;
            for (std::size_t i = 0; i <= j; ++i) {
                r[j - i][m + 1] += ((i % 2) ? -f : f) * g[j][m];
                f /= mu;
            }
        }
    }
    return r;
}

/* a acting on b-basis cells without precision loss (a raises the b-degree). */
static Grid raise_a(const Grid& g, const Rational& lam)
{
    const std::size_t n = g.size(), M = g[0].size();
    Grid r(n, std::vector<Rational>(M));
    for (std::size_t m = 0; m + 1 < M; ++m)
        for (std::size_t h = 0; h < n; ++h) {
            Rational v = (lam + static_cast<long>(m)) * g[h][m];
            if (h + 1 < n) v += g[h + 1][m];
            r[h][m + 1] = v;
        }
    return r;
}

XiElement monomial_convert(const XiElement& x, MonomialDirection direction)
{
    XiElement out;
    for (const auto& [lam, b] : x.blocks) {
        const std::size_t n = b.rows.size();
        const int M = b.M();
        Grid acc(n, std::vector<Rational>(static_cast<std::size_t>(M)));
        for (int m = M - 1; m >= 0; --m) {
            acc = direction == MonomialDirection::to_monomial ? integrate_monomial(acc, lam) : raise_a(acc, lam);
            for (std::size_t j = 0; j < n; ++j) acc[j][0] += b.cell(static_cast<int>(j), m);
        }
        XiBlock nb;
        for (auto& row : acc) nb.rows.emplace_back(std::move(row), M);
        out.blocks[lam] = std::move(nb);
    }
    return out;
}

static std::string power_of_s(const Rational& e)
{
    if (sgn(e) == 0) return "";
    if (e == 1) return "s";
    if (e.get_den() == 1) return "s^" + e.get_str();
    return "s^(" + e.get_str() + ")";
}

std::string render_monomial(const XiElement& x)
{
    XiElement mono = monomial_convert(x, MonomialDirection::to_monomial);
    std::string out;
    for (const auto& [lam, b] : mono.blocks) {
        for (int m = 0; m < b.M(); ++m)
            for (int j = b.N(); j >= 0; --j) {
                Rational c = b.cell(j, m);
                if (sgn(c) == 0) continue;
                std::string mono_s = power_of_s(lam - 1 + m);
                std::string logs;
                if (j == 1) logs = "log(s)";
                if (j >= 2) logs = "log(s)^" + std::to_string(j) + "/" + std::to_string(j) + "!";
                std::string body = mono_s;
                if (!logs.empty()) body += (body.empty() ? "" : "*") + logs;
                out += out.empty() ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + ");
                Rational mag = abs(c);
                if (body.empty())
                    out += mag.get_str();
                else if (mag == 1)
                    out += body;
                else
                    out += mag.get_str() + "*" + body;
            }
        out += (out.empty() ? "" : " + ") + std::string("O(") + power_of_s(lam - 1 + b.M()) + ")";
    }
    return out.empty() ? "0" : out;
}

}  // namespace theme_lab
