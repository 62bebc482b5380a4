#include "theme_lab/families.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "theme_lab/errors.hpp"
#include "theme_lab/homs.hpp"

namespace theme_lab {

static std::size_t ix(int j) { return static_cast<std::size_t>(j); }

std::string FamilySlot::name() const { return "S" + std::to_string(j) + ".b^" + std::to_string(exponent); }

std::string FamilySlot::identifier() const { return "S" + std::to_string(j) + "_b" + std::to_string(exponent); }

const FamilySlot* FamilySpace::find(const std::string& name) const
{
    for (const auto& s : slots)
        if (s.name() == name || s.identifier() == name) return &s;
    return nullptr;
}

FamilySpace family_space(const FundInvariants& inv)
{
    inv.validate();
    FamilySpace fs;
    fs.invariants = inv;
    const int k = inv.rank();
    for (int j = 1; j < k; ++j) {
        VjBasis vb = vj_basis(inv, j);
        for (int e : vb.exponents)
            if (e != 0) fs.slots.push_back({j, e, e == inv.p[ix(j - 1)]});
        fs.boxes.push_back(std::move(vb));
    }
    return fs;
}

ThemePresentation family_presentation(const FamilySpace& space, const FamilyPoint& point)
{
    for (const auto& [name, value] : point)
        if (!space.find(name)) throw InputError("unknown family slot " + name);
    const int k = space.invariants.rank();
    std::vector<std::vector<Rational>> polys(ix(std::max(k - 1, 0)), std::vector<Rational>{1});
    for (const auto& slot : space.slots) {
        Rational v = 0;
        for (const auto& [name, value] : point)
            if (name == slot.name() || name == slot.identifier()) v = value;
        if (slot.nonzero && sgn(v) == 0) throw ConstraintViolation(slot.name());
        auto& poly = polys[ix(slot.j - 1)];
        if (static_cast<int>(poly.size()) <= slot.exponent) poly.resize(ix(slot.exponent + 1));
        poly[ix(slot.exponent)] = v;
    }
    for (auto& poly : polys)
        while (poly.size() > 1 && sgn(poly.back()) == 0) poly.pop_back();
    return ThemePresentation::from_polys(space.invariants.lambdas(), polys);
}

ThemeModule family_evaluate(const FamilySpace& space, const FamilyPoint& point, std::optional<int> M)
{
    return ThemeModule::from_presentation(family_presentation(space, point), M);
}

std::vector<FamilyPoint> expand_grid(const FamilySpace& space, const std::map<std::string, std::vector<Rational>>& axes)
{
    std::vector<std::pair<std::string, std::vector<Rational>>> order;
    for (const auto& slot : space.slots)
        for (const auto& [name, vals] : axes)
            if (name == slot.name() || name == slot.identifier()) order.emplace_back(slot.name(), vals);
    for (const auto& [name, vals] : axes)
        if (!space.find(name)) throw InputError("unknown family slot " + name);
    std::vector<FamilyPoint> out{FamilyPoint{}};
    for (const auto& [name, vals] : order) {
        std::vector<FamilyPoint> next;
        for (const auto& p : out)
            for (const auto& v : vals) {
                FamilyPoint q = p;
                q[name] = v;
                next.push_back(std::move(q));
            }
        out = std::move(next);
    }
    return out;
}

/* ---------- parameter expressions ---------- */

namespace {

class ExprParser {
public:
    ExprParser(const std::string& s, const std::map<std::string, Rational>& vars) : s_(s), vars_(vars) {}

    Rational parse()
    {
        Rational v = expr();
        skip();
        if (pos_ != s_.size()) throw SyntaxError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return v;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Rational expr()
    {
        Rational v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    Rational term()
    {
        Rational v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                std::size_t at = pos_;
                Rational d = unary();
                if (sgn(d) == 0) throw SyntaxError("division by zero", at);
                v /= d;
            } else {
                return v;
            }
        }
    }

    Rational unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Rational power()
    {
        Rational base = atom();
        if (!eat('^')) return base;
        skip();
        std::size_t at = pos_;
        bool neg = eat('-');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw SyntaxError("integer exponent expected", at);
        long e = std::stol(s_.substr(start, pos_ - start));
        Rational r = 1;
        for (long i = 0; i < e; ++i) r *= base;
        if (neg) {
            if (sgn(r) == 0) throw SyntaxError("zero to a negative power", at);
            r = 1 / r;
        }
        return r;
    }

    Rational atom()
    {
        skip();
        if (pos_ >= s_.size()) throw SyntaxError("unexpected end of expression", pos_);
        if (eat('(')) {
            Rational v = expr();
            if (!eat(')')) throw SyntaxError("')' expected", pos_);
            return v;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Rational(mpz_class(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            auto it = vars_.find(id);
            if (it == vars_.end()) throw SyntaxError("unknown parameter " + id, start);
            return it->second;
        }
        throw SyntaxError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    const std::string& s_;
    const std::map<std::string, Rational>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

Rational eval_expression(const std::string& text, const std::map<std::string, Rational>& vars)
{
    Rational v = ExprParser(text, vars).parse();
    v.canonicalize();
    return v;
}

XiElement instantiate(const ParamXi& px, const FamilySpace& space, const FamilyPoint& point)
{
    std::map<std::string, Rational> vars;
    for (const auto& slot : space.slots) vars[slot.identifier()] = 0;
    for (const auto& [name, value] : point) {
        const FamilySlot* s = space.find(name);
        if (s) vars[s->identifier()] = value;
    }
    XiElement x;
    for (const auto& [lam, b] : px.blocks) {
        check_block_key(lam);
        XiBlock blk;
        for (int j = 0; j <= b.N; ++j) {
            BSeries row = BSeries::zero(b.M);
            if (ix(j) < b.cells.size())
                for (int m = 0; m < b.M && ix(m) < b.cells[ix(j)].size(); ++m) row.set(m, eval_expression(b.cells[ix(j)][ix(m)], vars));
            blk.rows.push_back(std::move(row));
        }
        x.blocks[lam] = std::move(blk);
    }
    return x;
}

/* ---------- rank-3 pullback ---------- */

PullbackWitness rank3_pullback_witness(const Rational& lambda, const Rational& alpha, const Rational& beta, const Rational& gamma,
                                       const Rational& gamma_target, int M)
{
    if (alpha == beta) throw InputError("the pullback witness needs alpha != beta");
    PullbackWitness w;
    w.U = (gamma - gamma_target) / (alpha - beta);
    w.V = BSeries::monomial(1, alpha * (gamma_target - gamma) - w.U * gamma, M);

    ThemePresentation src = ThemePresentation::from_polys({lambda, lambda, lambda}, {{1, beta, gamma}, {1, alpha}});
    ThemeModule E(src, M);
    FactorChain target{{lambda, lambda, lambda}, {BSeries({1, beta, gamma_target}, M), BSeries({1, alpha}, M)}};
    ModElem eps{w.V, BSeries::constant(w.U, M), BSeries::one(M)};
    ModElem r = apply_chain(target, eps, E);
    w.verified = std::all_of(r.begin(), r.end(), [](const BSeries& s) { return s.is_zero(); });
    return w;
}

/* ---------- scans ---------- */

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(ix(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[ix(x)] == x ? x : parent[ix(x)] = find(parent[ix(x)]); }
    void unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a != b) parent[ix(std::max(a, b))] = std::min(a, b);
    }
};

bool is_counterexample_family(const FundInvariants& inv)
{
    return inv.rank() == 3 && inv.p == std::vector<int>{1, 1};
}

}  // namespace

StratReport family_scan(const FamilySpace& space, const std::vector<FamilyPoint>& grid, const std::optional<ParamXi>& xi,
                        std::optional<int> M)
{
    StratReport rep;
    const int n = static_cast<int>(grid.size());
    std::vector<ThemeModule> mods;
    std::vector<PropertyU> ustat;
    FundInvariants inv0 = space.invariants;

    for (int i = 0; i < n; ++i) {
        ScanPoint pt;
        pt.sigma = grid[ix(i)];
        ThemeModule E = family_evaluate(space, grid[ix(i)], M);
        pt.presentation = E.presentation();
        pt.precision = E.precision();
        try {
            if (!(fundamental_invariants_checked(E) == inv0)) rep.invariants_constant = false;
        } catch (const NotATheme&) {
            pt.is_theme = false;
            rep.invariants_constant = false;
        } catch (const Mismatch&) {
            rep.invariants_constant = false;
        }
        std::string be = bernstein(E).element.to_string();
        if (i == 0) rep.bernstein_element = be;
        if (be != rep.bernstein_element) rep.bernstein_constant = false;

        StabilityReport st = is_stable(E);
        pt.stable = st.stable;
        pt.end_dim = st.end_dim;
        pt.stability_certified = st.certified;
        if (!st.certified) rep.certified = false;
        (pt.stable ? rep.stable_points : rep.unstable_points).push_back(i);

        CanonicalForm cf = canonical_form(E);
        pt.canonical = cf.presentation;
        pt.canonical_certified = cf.certified;
        ustat.push_back(property_U_status(E));

        if (xi) {
            XiElement x = instantiate(*xi, space, grid[ix(i)]);
            int count = 0;
            for (const auto& [lam, b] : x.blocks) count += b.N() + 1;
            SpanBasis sb = span_rank(a_orbit(x, count));
            pt.xi_rank = sb.rank();
            if (!sb.certified()) rep.certified = false;
            rep.xi_rank_strata[sb.rank()].push_back(i);
        }

        if (is_counterexample_family(inv0)) {
            const BSeries& S1 = pt.presentation.units[0];
            const BSeries& S2 = pt.presentation.units[1];
            Rational beta = S1.coeff(1), gamma = S1.coeff(2), alpha = S2.coeff(1);
            if (alpha != beta) {
                pt.witness = rank3_pullback_witness(inv0.lambda1, alpha, beta, gamma, 0, E.precision());
                if (!pt.witness->verified) rep.witnesses_verified = false;
            }
        }
        rep.points.push_back(std::move(pt));
        mods.push_back(std::move(E));
    }

    UnionFind uf(n);
    bool all_u = std::all_of(ustat.begin(), ustat.end(), [](PropertyU u) { return u == PropertyU::U; });
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (uf.find(i) == uf.find(j)) continue;
            const auto& a = rep.points[ix(i)];
            const auto& b = rep.points[ix(j)];
            if (a.canonical == b.canonical) {
                uf.unite(i, j);
                continue;
            }
            if (all_u || (ustat[ix(i)] == PropertyU::U && ustat[ix(j)] == PropertyU::U)) continue;
            HomSpace h = hom_space(mods[ix(j)], mods[ix(i)]);
            if (!h.certified) rep.certified = false;
            const int k = mods[ix(i)].rank();
            for (const auto& y : h.basis)
                if (y[ix(k - 1)].is_unit()) {
                    uf.unite(i, j);
                    break;
                }
        }
    std::map<int, int> ids;
    for (int i = 0; i < n; ++i) {
        int root = uf.find(i);
        auto it = ids.find(root);
        if (it == ids.end()) it = ids.emplace(root, static_cast<int>(ids.size())).first;
        rep.points[ix(i)].iso_class = it->second;
    }
    rep.iso_class_count = static_cast<int>(ids.size());
    return rep;
}

}  // namespace theme_lab
