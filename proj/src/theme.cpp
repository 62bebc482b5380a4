#include "theme_lab/theme.hpp"

#include <algorithm>
#include <set>

#include "theme_lab/errors.hpp"

namespace theme_lab {

static std::size_t ix(int j) { return static_cast<std::size_t>(j); }

static bool is_integer(const Rational& q) { return q.get_den() == 1; }

static int to_int(const Rational& q) { return static_cast<int>(q.get_num().get_si()); }

/* ---------- invariants ---------- */

std::vector<Rational> FundInvariants::lambdas() const
{
    std::vector<Rational> out{lambda1};
    for (int pj : p) out.push_back(out.back() + pj - 1);
    return out;
}

void FundInvariants::validate() const
{
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] < 0) throw InvalidInvariants("p_" + std::to_string(j + 1) + " is negative");
    if (lambda1 <= rank() - 1) throw InvalidInvariants("lambda_1 must exceed k-1 = " + std::to_string(rank() - 1));
}

std::string FundInvariants::to_string() const
{
    std::string out = "lambda1=" + lambda1.get_str() + "; p=(";
    for (std::size_t j = 0; j < p.size(); ++j) out += (j ? "," : "") + std::to_string(p[j]);
    return out + ")";
}

/* ---------- presentations ---------- */

ThemePresentation ThemePresentation::from_polys(std::vector<Rational> lambdas, const std::vector<std::vector<Rational>>& polys)
{
    ThemePresentation p;
    p.lambdas = std::move(lambdas);
    for (const auto& c : polys) {
        std::vector<Rational> cc = c.empty() ? std::vector<Rational>{1} : c;
        int n = static_cast<int>(cc.size());
        p.units.emplace_back(std::move(cc), n);
        p.exact.push_back(true);
    }
    return p;
}

std::vector<int> ThemePresentation::p() const
{
    std::vector<int> out;
    for (std::size_t j = 0; j + 1 < lambdas.size(); ++j) {
        Rational d = lambdas[j + 1] - lambdas[j] + 1;
        out.push_back(is_integer(d) ? to_int(d) : -1);
    }
    return out;
}

FundInvariants ThemePresentation::invariants() const
{
    if (lambdas.empty()) return {0, {}};
    return {lambdas[0], p()};
}

void ThemePresentation::validate() const
{
    const int k = rank();
    if (static_cast<int>(units.size()) != std::max(k - 1, 0))
        throw InvalidInvariants("expected " + std::to_string(std::max(k - 1, 0)) + " units, got " + std::to_string(units.size()));
    if (!exact.empty() && exact.size() != units.size()) throw InvalidInvariants("exactness flags do not match the units");
    for (int j = 0; j + 1 < k; ++j) {
        Rational d = lambdas[ix(j + 1)] - lambdas[ix(j)] + 1;
        if (!is_integer(d))
            throw InvalidInvariants("lambda_" + std::to_string(j + 1) + " and lambda_" + std::to_string(j + 2) + " differ mod 1");
        if (sgn(d) < 0) throw InvalidInvariants("p_" + std::to_string(j + 1) + " = " + d.get_str() + " is negative");
    }
    for (int j = 0; j + 1 < k; ++j)
        if (units[ix(j)][0] != 1) throw InvalidInvariants("S_" + std::to_string(j + 1) + " must have constant term 1");
    if (k > 0 && lambdas[0] <= k - 1) throw InvalidInvariants("lambda_1 must exceed k-1 = " + std::to_string(k - 1));
}

BSeries ThemePresentation::unit(int j, int M) const
{
    const BSeries& s = units[ix(j - 1)];
    bool ex = exact.empty() || exact[ix(j - 1)];
    if (ex) {
        std::vector<Rational> c(ix(M));
        for (int i = 0; i < std::min(M, s.prec()); ++i) c[ix(i)] = s[i];
        return BSeries(std::move(c), M);
    }
    return s.truncated(std::min(M, s.prec()));
}

static std::vector<Rational> trimmed(const BSeries& s)
{
    std::vector<Rational> c = s.coeffs();
    while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
    return c;
}

bool ThemePresentation::operator==(const ThemePresentation& o) const
{
    if (lambdas != o.lambdas || units.size() != o.units.size()) return false;
    for (std::size_t j = 0; j < units.size(); ++j) {
        bool ex = (exact.empty() || exact[j]) && (o.exact.empty() || o.exact[j]);
        if (ex) {
            if (trimmed(units[j]) != trimmed(o.units[j])) return false;
        } else if (!units[j].agrees_with(o.units[j])) {
            return false;
        }
    }
    return true;
}

std::string ThemePresentation::to_string() const
{
    std::string out = "lambda=(";
    for (std::size_t j = 0; j < lambdas.size(); ++j) out += (j ? "," : "") + lambdas[j].get_str();
    out += ")";
    for (std::size_t j = 0; j < units.size(); ++j) {
        bool ex = exact.empty() || exact[j];
        out += "; S" + std::to_string(j + 1) + "=" + (ex ? units[j].to_string() : units[j].to_string_with_order());
    }
    return out;
}

/* ---------- module ---------- */

ThemeModule::ThemeModule(ThemePresentation pres, int M) : pres_(std::move(pres)), M_(M)
{
    pres_.validate();
    /* a unit known only modulo b^n caps the module precision */
    for (std::size_t j = 0; j < pres_.units.size(); ++j)
        if (!pres_.exact.empty() && !pres_.exact[j]) M_ = std::min(M_, pres_.units[j].prec());
    if (M_ < 2) throw InsufficientPrecision("module precision must be at least 2");
    for (int j = 1; j < pres_.rank(); ++j) units_.push_back(pres_.unit(j, M_));
}

int ThemeModule::default_precision(const ThemePresentation& pres)
{
    const int k = pres.rank();
    if (k == 0) return 8;
    int sum_p = 0;
    for (int pj : pres.p()) sum_p += std::max(pj, 0);
    Rational spread = pres.lambdas.back() - pres.lambdas.front();
    return std::max(to_int(spread), 0) + sum_p + k + 8;
}

ThemeModule ThemeModule::from_presentation(const ThemePresentation& pres, std::optional<int> M)
{
    return ThemeModule(pres, M ? *M : default_precision(pres));
}

Rational ThemeModule::lambda_bar() const { return class_of(pres_.lambdas.at(0)); }

FactorChain ThemeModule::chain() const { return {pres_.lambdas, units_}; }

ModElem ThemeModule::zero() const { return ModElem(ix(rank()), BSeries::zero(M_)); }

ModElem ThemeModule::basis(int j) const
{
    ModElem x = zero();
    x[ix(j - 1)] = BSeries::one(M_);
    return x;
}

ModElem ThemeModule::act_a(const ModElem& x) const
{
    const int k = rank();
    ModElem y(ix(k));
    for (int j = 1; j <= k; ++j) {
        const BSeries& u = x[ix(j - 1)];
        BSeries v = u.shifted(1).scaled(lambda(j)) + u.b2_derivative();
        if (j < k) v += unit(j) * x[ix(j)];
        y[ix(j - 1)] = std::move(v);
    }
    return y;
}

ModElem ThemeModule::act_b(const ModElem& x) const
{
    ModElem y;
    for (const auto& u : x) y.push_back(u.shifted(1));
    return y;
}

ModElem ThemeModule::mul_series(const BSeries& s, const ModElem& x) const
{
    ModElem y;
    for (const auto& u : x) y.push_back(s * u);
    return y;
}

ModElem ThemeModule::sub(const ModElem& x, const ModElem& y) const
{
    ModElem r = x;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= y[j];
    return r;
}

ModElem ThemeModule::add(const ModElem& x, const ModElem& y) const
{
    ModElem r = x;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += y[j];
    return r;
}

ModElem ThemeModule::scale(const Rational& q, const ModElem& x) const
{
    ModElem r;
    for (const auto& u : x) r.push_back(u.scaled(q));
    return r;
}

std::string render_elem(const ModElem& x)
{
    std::string out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j].is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + x[j].to_string() + ")*e" + std::to_string(j + 1);
    }
    return out.empty() ? "0" : out;
}

int top_index(const ModElem& x)
{
    for (int j = static_cast<int>(x.size()); j >= 1; --j)
        if (!x[ix(j - 1)].is_zero()) return j;
    return 0;
}

/* ---------- realization in Xi ---------- */

int default_xi_precision(const ThemeModule& E)
{
    /* each descent step spends the b-valuation of its top row */
    int spent = 0;
    for (int j = 1; j <= E.rank(); ++j) spent += to_int(E.lambda(j) - E.lambda_bar());
    return E.precision() + spent + 2 * E.rank() + 4;
}

std::vector<XiElement> realize_basis(const ThemeModule& E, std::optional<int> xi_precision)
{
    const int k = E.rank();
    if (k == 0) return {};
    const int Mx = xi_precision ? *xi_precision : default_xi_precision(E);
    const Rational lb = E.lambda_bar();
    const int m1 = to_int(E.lambda(1) - lb);
    if (m1 >= Mx) throw InsufficientPrecision("realization precision below the first exponent");

    std::vector<XiElement> phi{XiElement::basis(lb, 0, m1, 0, Mx)};
    for (int j = 2; j <= k; ++j) {
        BSeries S = E.presentation().unit(j - 1, phi.back().precision());
        XiElement z = S * phi.back();
        const int q = to_int(E.lambda(j) - lb);
        XiElement y = solve_affine(z, q, j - 2);
        if (y.block(lb).rows[ix(j - 1)].is_zero()) throw NotATheme(j - 1);
        phi.push_back(std::move(y));
    }
    return phi;
}

XiElement realize_in_xi(const ThemeModule& E, std::optional<int> xi_precision)
{
    return realize_basis(E, xi_precision).back();
}

XiElement image_of(const ModElem& x, const std::vector<XiElement>& basis_images)
{
    XiElement acc;
    for (std::size_t j = 0; j < x.size(); ++j) {
        XiElement term = x[j] * basis_images[j];
        acc = acc.blocks.empty() ? term : acc + term;
    }
    return acc;
}

/* ---------- Jordan-Holder descent ---------- */

JHFiltration jordan_holder(const XiElement& phi)
{
    if (phi.blocks.size() != 1) throw InputError("Jordan-Holder descent expects a single-block element");
    JHFiltration jh;
    jh.lambda_bar = phi.blocks.begin()->first;
    const int k = phi.log_degree() + 1;
    if (k == 0) throw InputError("zero element has no filtration");

    std::vector<XiElement> gens(ix(k));
    std::vector<BSeries> units(ix(k));
    std::vector<Rational> lams(ix(k));
    XiElement cur = phi;
    for (int j = k; j >= 1; --j) {
        XiBlock& blk = cur.blocks.begin()->second;
        blk.rows.resize(ix(j), BSeries::zero(blk.M()));
        gens[ix(j - 1)] = cur;
        const BSeries& top = blk.rows[ix(j - 1)];
        Valuation v = top.valuation();
        if (!v.exact) throw PrecisionUncertified("top Log row of F_" + std::to_string(j) + " vanishes at working precision");
        lams[ix(j - 1)] = jh.lambda_bar + v.value;
        BSeries T = top.divided_by_b(v.value);
        units[ix(j - 1)] = T;
        if (j == 1) break;
        XiElement g = T.invert_unit() * cur;
        cur = act_a(g) - lams[ix(j - 1)] * act_b(g);
    }
    jh.lambdas = lams;
    jh.generators = gens;
    jh.top_units = units;
    for (int j = 1; j <= k; ++j) {
        SpanBasis sb = span_rank(a_orbit(gens[ix(j - 1)], j));
        if (!sb.certified() || sb.rank() != j) jh.certified = false;
        jh.F.push_back(std::move(sb));
    }
    return jh;
}

FundInvariants JHFiltration::invariants() const
{
    FundInvariants inv{lambdas.at(0), {}};
    for (std::size_t j = 0; j + 1 < lambdas.size(); ++j) inv.p.push_back(to_int(lambdas[j + 1] - lambdas[j] + 1));
    return inv;
}

ThemePresentation JHFiltration::presentation() const
{
    ThemePresentation p;
    p.lambdas = lambdas;
    for (std::size_t j = 0; j + 1 < lambdas.size(); ++j) {
        const BSeries& T = top_units[j];
        p.units.push_back(T.scaled(1 / T[0]));
        p.exact.push_back(false);
    }
    return p;
}

FundInvariants fundamental_invariants(const ThemeModule& E) { return E.presentation().invariants(); }

FundInvariants fundamental_invariants_checked(const ThemeModule& E)
{
    FundInvariants a = fundamental_invariants(E);
    FundInvariants b = jordan_holder(realize_in_xi(E)).invariants();
    if (!(a == b)) throw Mismatch("presentation gives " + a.to_string() + " but the realization gives " + b.to_string());
    return a;
}

BernsteinData bernstein(const ThemeModule& E) { return chain_bernstein(E.chain()); }

/* ---------- derived themes ---------- */

static ThemePresentation slice(const ThemePresentation& p, int from, int to)
{
    ThemePresentation r;
    r.lambdas.assign(p.lambdas.begin() + from, p.lambdas.begin() + to);
    for (int j = from; j + 1 < to; ++j) {
        r.units.push_back(p.units[ix(j)]);
        r.exact.push_back(p.exact.empty() || p.exact[ix(j)]);
    }
    return r;
}

ThemeModule quotient_by_F(const ThemeModule& E, int j)
{
    if (j < 0 || j > E.rank()) throw InputError("quotient index out of range");
    return ThemeModule(slice(E.presentation(), j, E.rank()), E.precision());
}

ThemeModule sub_F(const ThemeModule& E, int j)
{
    if (j < 0 || j > E.rank()) throw InputError("submodule index out of range");
    return ThemeModule(slice(E.presentation(), 0, j), E.precision());
}

ThemeModule twist_or_dual(const ThemeModule& E, const Rational& delta, TwistMode mode)
{
    const ThemePresentation& p = E.presentation();
    const int k = p.rank();
    ThemePresentation r;
    if (mode == TwistMode::twist) {
        r = p;
        for (auto& l : r.lambdas) l += delta;
        return ThemeModule(r, E.precision());
    }
    if (delta <= p.lambdas.back() + k - 1)
        throw ShiftTooSmall("delta must exceed lambda_k + k - 1 = " + Rational(p.lambdas.back() + k - 1).get_str());
    for (int i = k; i >= 1; --i) r.lambdas.push_back(delta - p.lambdas[ix(i - 1)]);
    for (int j = k - 1; j >= 1; --j) {
        r.units.push_back(p.units[ix(j - 1)]);
        r.exact.push_back(p.exact.empty() || p.exact[ix(j - 1)]);
    }
    return ThemeModule(r, E.precision());
}

/* ---------- exponent decomposition ---------- */

namespace {

struct Columns {
    std::vector<SpanBasis::Position> pos;
};

Columns columns_of(const std::vector<XiElement>& gens)
{
    std::map<Rational, int> maxj;
    for (const auto& g : gens)
        for (const auto& [k, b] : g.blocks) maxj[k] = std::max(maxj[k], b.N());
    Columns c;
    for (const auto& [k, n] : maxj)
        for (int j = n; j >= 0; --j) c.pos.push_back({k, j});
    return c;
}

std::vector<SeriesRow> rows_of(const std::vector<XiElement>& gens, const Columns& c)
{
    int prec = 1 << 30;
    for (const auto& g : gens) prec = std::min(prec, g.precision());
    std::vector<SeriesRow> rows;
    for (const auto& g : gens) {
        SeriesRow r;
        for (const auto& p : c.pos) {
            auto it = g.blocks.find(p.block);
            if (it != g.blocks.end() && p.j <= it->second.N())
                r.push_back(it->second.rows[ix(p.j)].truncated(prec));
            else
                r.push_back(BSeries::zero(prec));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

int orbit_length(const XiElement& phi)
{
    int n = 0;
    for (const auto& [k, b] : phi.blocks) n += b.N() + 1;
    return n;
}

/* Residual rows spanning E intersected with the chosen blocks. */
std::vector<SeriesRow> primitive_rows(const XiElement& phi, const std::vector<Rational>& classes, Columns& cols, bool* certified)
{
    auto gens = a_orbit(phi, orbit_length(phi));
    cols = columns_of(gens);
    std::set<Rational> keep(classes.begin(), classes.end());
    std::vector<int> rank(cols.pos.size());
    for (std::size_t i = 0; i < cols.pos.size(); ++i) rank[i] = keep.count(cols.pos[i].block) ? -1 : static_cast<int>(i);
    Elimination e = eliminate(rows_of(gens, cols), rank);
    if (certified) *certified = e.certified;
    return e.residual;
}

}  // namespace

std::vector<Rational> ExpDecomposition::exp_set() const
{
    std::vector<Rational> out;
    for (const auto& c : classes)
        if (c.met) out.push_back(c.lambda_bar);
    return out;
}

int primitive_rank(const XiElement& phi, const std::vector<Rational>& classes, bool* certified)
{
    Columns cols;
    bool c1 = true, c2 = true;
    auto rows = primitive_rows(phi, classes, cols, &c1);
    int r = rows.empty() ? 0 : series_rank(rows, &c2);
    if (certified) *certified = c1 && c2;
    return r;
}

std::vector<int> filtration_ranks(const XiElement& phi, const std::vector<Rational>& order)
{
    std::vector<int> out;
    std::vector<Rational> acc;
    for (const auto& c : order) {
        acc.push_back(c);
        out.push_back(primitive_rank(phi, acc));
    }
    return out;
}

ExpDecomposition exp_decompose(const XiElement& phi)
{
    ExpDecomposition d;
    const int n = orbit_length(phi);
    auto gens = a_orbit(phi, n);
    SpanBasis total = span_rank(gens);
    d.rank = total.rank();
    d.certified = total.certified();

    for (const auto& [lam, blk] : phi.blocks) {
        ExpClass c;
        c.lambda_bar = lam;
        c.coprimitive_generator = phi.project(lam);
        std::vector<XiElement> proj;
        for (const auto& g : gens) proj.push_back(g.project(lam));
        SpanBasis sb = span_rank(proj);
        c.coprimitive_rank = sb.rank();
        c.met = c.coprimitive_rank > 0;
        if (!sb.certified()) d.certified = false;

        Columns cols;
        bool ok = true;
        auto rows = primitive_rows(phi, {lam}, cols, &ok);
        if (!ok) d.certified = false;
        if (!rows.empty()) {
            bool ok2 = true;
            c.primitive_rank = series_rank(rows, &ok2);
            std::vector<int> order;
            for (std::size_t i = 0; i < cols.pos.size(); ++i)
                if (cols.pos[i].block == lam) order.push_back(static_cast<int>(i));
            auto vals = ordered_pivot_valuations(rows, order, &ok2);
            if (!ok2) d.certified = false;
            for (auto it = vals.rbegin(); it != vals.rend(); ++it) c.primitive_lambdas.push_back(lam + *it);
        }
        d.classes.push_back(std::move(c));
    }
    return d;
}

}  // namespace theme_lab
