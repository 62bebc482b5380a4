#include "theme_lab/normalform.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "theme_lab/errors.hpp"

namespace theme_lab {

namespace {

std::size_t ix(int j) { return static_cast<std::size_t>(j); }

struct PivotRow {
    BSeries image;
    BSeries alpha;
};

}  // namespace

VjBasis vj_basis(const FundInvariants& inv, int j)
{
    const int k = inv.rank();
    if (j < 1 || j > k) throw InputError("V_j index out of range");
    VjBasis v;
    v.j = j;
    for (int e = 0; e < k - j; ++e) v.exponents.push_back(e);
    int partial = 0;
    for (int h = j; h <= k - 1; ++h) {
        partial += inv.p[ix(h - 1)];
        if (partial >= k - j) {
            v.q = partial;
            v.exponents.push_back(partial);
            break;
        }
    }
    return v;
}

Supplementary supplementary_decompose(const BSeries& x, const Rational& lambda_j, const FactorChain& Pj)
{
    const int M = x.prec();
    FundInvariants inv{lambda_j, {}};
    Rational prev = lambda_j;
    for (const auto& l : Pj.lambdas) {
        inv.p.push_back(static_cast<int>(Rational(l - prev + 1).get_num().get_si()));
        prev = l;
    }
    VjBasis vb = vj_basis(inv, 1);
    std::set<int> in_v(vb.exponents.begin(), vb.exponents.end());

    FactorChain chain = Pj;
    for (auto& s : chain.units) {
        std::vector<Rational> c(ix(M));
        for (int i = 0; i < std::min(M, s.prec()); ++i) c[ix(i)] = s[i];
        s = BSeries(std::move(c), M);
    }
    RankOneHost host{lambda_j};

    std::map<int, PivotRow> piv;
    for (int q = 0; q < M; ++q) {
        PivotRow row{apply_chain(chain, BSeries::monomial(q, 1, M), host), BSeries::monomial(q, 1, M)};
        for (int d = 0; d < M; ++d) {
            if (in_v.count(d) || sgn(row.image[d]) == 0) continue;
            auto it = piv.find(d);
            if (it == piv.end()) {
                piv.emplace(d, std::move(row));
                break;
            }
            Rational c = row.image[d] / it->second.image[d];
            row.image -= it->second.image.scaled(c);
            row.alpha -= it->second.alpha.scaled(c);
        }
    }

    Supplementary out{BSeries::zero(M), x, true};
    for (int d = 0; d < M; ++d) {
        if (in_v.count(d) || sgn(out.v[d]) == 0) continue;
        auto it = piv.find(d);
        if (it == piv.end()) {
            out.certified = false;
            continue;
        }
        Rational c = out.v[d] / it->second.image[d];
        out.v -= it->second.image.scaled(c);
        out.alpha += it->second.alpha.scaled(c);
    }
    return out;
}

const char* to_string(PropertyU u)
{
    switch (u) {
    case PropertyU::U: return "U";
    case PropertyU::notU: return "notU";
    case PropertyU::unknown: return "unknown";
    }
    return "unknown";
}

PropertyU property_U_status(const ThemeModule& E)
{
    const int k = E.rank();
    if (k <= 2) return PropertyU::U;
    std::vector<int> p = E.presentation().p();
    if (std::all_of(p.begin(), p.end(), [](int v) { return v == 0; })) return PropertyU::U;
    if (k == 3 && p[1] == 0) return PropertyU::U;
    if (is_stable(E).stable) return PropertyU::U;
    if (k == 3) return PropertyU::notU;
    if (p[ix(k - 2)] >= 1) return PropertyU::notU;
    return PropertyU::unknown;
}

namespace {

struct Canon {
    ThemePresentation pres;
    ModElem gen;
    bool ok = true;
};

FactorChain padded_chain(const ThemePresentation& p, int M)
{
    FactorChain c;
    c.lambdas = p.lambdas;
    for (int j = 1; j < p.rank(); ++j) c.units.push_back(p.unit(j, M));
    return c;
}

ModElem lifted(const ModElem& qelem)
{
    ModElem r{BSeries::zero(qelem[0].prec())};
    r.insert(r.end(), qelem.begin(), qelem.end());
    return r;
}

struct Correction {
    BSeries z;
    BSeries alpha;
    ModElem lift;
};

Canon canon_rec(const ThemeModule& E)
{
    const int k = E.rank();
    const int M = E.precision();
    Canon out;
    if (k == 1) {
        out.pres.lambdas = E.presentation().lambdas;
        out.gen = E.basis(1);
        return out;
    }
    ThemeModule Q = quotient_by_F(E, 1);
    Canon rq = canon_rec(Q);
    out.ok = rq.ok;

    FactorChain chainQ = padded_chain(rq.pres, M);
    ModElem sigma = lifted(rq.gen);
    ModElem y = apply_chain(chainQ, sigma, E);
    for (int j = 2; j <= k; ++j)
        if (!y[ix(j - 1)].is_zero()) throw PrecisionUncertified("quotient relation does not close at precision " + std::to_string(M));
    Supplementary sd = supplementary_decompose(y[0], E.lambda(1), chainQ);
    if (!sd.certified) out.ok = false;
    BSeries v = sd.v, alpha = sd.alpha;

    if (property_U_status(E) != PropertyU::U) {
        HomSpace endq = hom_space(Q, Q);
        if (!endq.certified) out.ok = false;
        std::vector<Correction> corr;
        for (const auto& yq : endq.basis) {
            if (top_index(yq) >= Q.rank()) continue;
            ModElem yt;
            for (const auto& s : yq) yt.push_back(s.truncated(M));
            ModElem img = apply_endomorphism(endomorphism_images(Q, yt), rq.gen);
            ModElem lift = lifted(img);
            ModElem t = apply_chain(chainQ, lift, E);
            Supplementary si = supplementary_decompose(t[0], E.lambda(1), chainQ);
            if (!si.certified) out.ok = false;
            corr.push_back({si.v, si.alpha, lift});
        }
        /* echelon on degrees >= 1, lowest degree first */
        std::map<int, Correction> piv;
        for (auto& c : corr) {
            for (int d = 1; d < M; ++d) {
                if (sgn(c.z[d]) == 0) continue;
                auto it = piv.find(d);
                if (it == piv.end()) {
                    piv.emplace(d, c);
                    break;
                }
                Rational f = c.z[d] / it->second.z[d];
                c.z -= it->second.z.scaled(f);
                c.alpha -= it->second.alpha.scaled(f);
                for (std::size_t j = 0; j < c.lift.size(); ++j) c.lift[j] -= it->second.lift[j].scaled(f);
            }
        }
        for (const auto& [d, c] : piv) {
            Rational f = v[d] / c.z[d];
            if (sgn(f) == 0) continue;
            v -= c.z.scaled(f);
            alpha -= c.alpha.scaled(f);
            for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] -= c.lift[j].scaled(f);
        }
    }

    const Rational s0 = v[0];
    if (sgn(s0) == 0) throw NotATheme(1);
    sigma[0] -= alpha;
    out.gen = E.scale(1 / s0, sigma);
    v = v.scaled(1 / s0);

    FundInvariants inv = E.presentation().invariants();
    VjBasis vb = vj_basis(inv, 1);
    const int top = *std::max_element(vb.exponents.begin(), vb.exponents.end());
    const int p1 = inv.p[0];
    if (p1 < M && sgn(v[p1]) == 0) throw NotATheme(1);
    std::vector<Rational> poly;
    for (int d = 0; d <= top && d < M; ++d) poly.push_back(v[d]);
    while (poly.size() > 1 && sgn(poly.back()) == 0) poly.pop_back();

    out.pres.lambdas = E.presentation().lambdas;
    const int n = static_cast<int>(poly.size());
    out.pres.units.emplace_back(std::move(poly), n);
    out.pres.exact.push_back(true);
    for (std::size_t j = 0; j < rq.pres.units.size(); ++j) {
        out.pres.units.push_back(rq.pres.units[j]);
        out.pres.exact.push_back(rq.pres.exact.empty() || rq.pres.exact[j]);
    }
    return out;
}

}  // namespace

CanonicalForm canonical_form(const ThemeModule& E)
{
    Canon c = canon_rec(E);
    CanonicalForm cf;
    cf.presentation = c.pres;
    cf.generator = c.gen;
    cf.certified = c.ok && property_U_status(E) == PropertyU::U;
    return cf;
}

Rational rank2_invariant(const ThemeModule& E)
{
    const int k = E.rank();
    if (k < 2) throw InputError("the rank-2 invariant needs rank at least 2");
    ThemeModule Q = quotient_by_F(E, k - 2);
    const int p = Q.presentation().p()[0];
    if (p == 0) return 1;
    CanonicalForm cf = canonical_form(Q);
    return cf.presentation.units[0].coeff(p);
}

IsoResult iso_test(const ThemeModule& E, const ThemeModule& Ep)
{
    IsoResult r;
    if (E.rank() != Ep.rank() || !(E.presentation().invariants() == Ep.presentation().invariants())) {
        r.method = "invariants";
        return r;
    }
    if (E.rank() <= 1) {
        r.isomorphic = true;
        r.method = "invariants";
        return r;
    }
    CanonicalForm a = canonical_form(E), b = canonical_form(Ep);
    if (a.presentation == b.presentation) {
        r.isomorphic = true;
        r.method = "canonical";
        return r;
    }
    if (a.certified && b.certified) {
        r.method = "canonical";
        return r;
    }
    HomSpace h = hom_space(Ep, E);
    r.certified = h.certified;
    r.method = "hom";
    const int k = E.rank();
    for (const auto& y : h.basis)
        if (y[ix(k - 1)].is_unit()) {
            r.isomorphic = true;
            r.witness = y;
            break;
        }
    return r;
}

}  // namespace theme_lab
