#include "theme_lab/homs.hpp"

#include <algorithm>

#include "theme_lab/errors.hpp"
#include "theme_lab/qlinalg.hpp"

namespace theme_lab {

namespace {

std::size_t ix(int j) { return static_cast<std::size_t>(j); }

int as_int(const Rational& q) { return static_cast<int>(q.get_num().get_si()); }

using ParamElem = std::vector<ParamSeries>;

struct Solver {
    const ThemeModule& E;
    int nparams = 0;
    std::vector<LinForm> constraints;

    /* z with (a - mu b) z = w; loses k orders of precision. */
    ParamElem stage(const Rational& mu, const ParamElem& w)
    {
        const int k = E.rank();
        const int Mw = w[0].prec();
        ParamElem z(ix(k + 1), ParamSeries(1));
        int upper = Mw;
        for (int j = k; j >= 1; --j) {
            const ParamSeries& wj = w[ix(j - 1)];
            ParamSeries sz(1);
            bool has_next = j < k;
            if (has_next) {
                sz = E.presentation().unit(j, upper) * z[ix(j)];
                upper = std::min(upper, sz.prec());
            }
            const int P = upper - 1;
            if (P < 1) throw InsufficientPrecision("hom solver ran out of precision");
            ParamSeries zj(P);
            /* degree 0 */
            LinForm c0 = has_next ? z[ix(j)].c[0] : LinForm();
            c0 -= wj.c[0];
            if (!c0.is_zero()) constraints.push_back(c0);
            for (int n = 1; n <= P; ++n) {
                LinForm rhs = wj.c[ix(n)];
                if (has_next) rhs -= sz.c[ix(n)];
                Rational c = E.lambda(j) - mu + n - 1;
                if (sgn(c) != 0) {
                    rhs *= 1 / c;
                    zj.c[ix(n - 1)] = rhs;
                } else {
                    zj.c[ix(n - 1)] = LinForm::param(nparams++);
                    if (!rhs.is_zero()) constraints.push_back(rhs);
                }
            }
            z[ix(j - 1)] = std::move(zj);
            upper = P;
        }
        z.pop_back();
        for (auto& s : z) s = s.truncated(upper);
        return z;
    }
};

int resonance_bound(const ThemeModule& Ep, const ThemeModule& E)
{
    Rational hi = *std::max_element(Ep.presentation().lambdas.begin(), Ep.presentation().lambdas.end());
    Rational lo = *std::min_element(E.presentation().lambdas.begin(), E.presentation().lambdas.end());
    Rational d = hi - lo;
    return sgn(d) > 0 ? as_int(d) + 2 : 2;
}

struct RawHom {
    std::vector<ModElem> basis;
    int precision = 0;
};

RawHom hom_at(const ThemeModule& Ep, const ThemeModule& E, int W)
{
    const int k = E.rank(), kp = Ep.rank();
    Solver s{E};
    ParamElem w(ix(k), ParamSeries(W));
    for (int i = 1; i <= kp; ++i) {
        if (i > 1) {
            const int P = w[0].prec();
            BSeries T = Ep.presentation().unit(i - 1, P);
            for (auto& c : w) c = T * c;
        }
        w = s.stage(Ep.lambda(i), w);
    }
    RawHom r;
    r.precision = w[0].prec();
    QMatrix C(static_cast<int>(s.constraints.size()), s.nparams);
    for (std::size_t i = 0; i < s.constraints.size(); ++i)
        for (const auto& [p, v] : s.constraints[i].terms()) C(static_cast<int>(i), p) = v;
    auto ns = nullspace(C);
    if (ns.empty()) return r;

    /* triangularize: columns e_k ascending degree, then e_{k-1}, ... */
    const int P = r.precision;
    QMatrix B(static_cast<int>(ns.size()), k * P);
    for (std::size_t v = 0; v < ns.size(); ++v)
        for (int j = k; j >= 1; --j) {
            BSeries y = w[ix(j - 1)].eval(ns[v]);
            for (int n = 0; n < P; ++n) B(static_cast<int>(v), (k - j) * P + n) = y[n];
        }
    auto piv = rref(B);
    for (std::size_t row = 0; row < piv.size(); ++row) {
        ModElem y(ix(k), BSeries::zero(P));
        for (int j = k; j >= 1; --j)
            for (int n = 0; n < P; ++n) y[ix(j - 1)].set(n, B(static_cast<int>(row), (k - j) * P + n));
        r.basis.push_back(std::move(y));
    }
    return r;
}

int image_rank(const ThemeModule& E, const ModElem& y, int count, bool* certified)
{
    std::vector<SeriesRow> rows{y};
    for (int i = 1; i < count; ++i) rows.push_back(E.act_a(rows.back()));
    return series_rank(rows, certified);
}

}  // namespace

HomSpace hom_space(const ThemeModule& Ep, const ThemeModule& E, std::optional<int> extra_precision)
{
    HomSpace h;
    if (Ep.rank() == 0 || E.rank() == 0 || class_of(Ep.lambda(1)) != class_of(E.lambda(1))) {
        h.precision = E.precision();
        return h;
    }
    const int base = std::max(E.precision(), Ep.precision()) + resonance_bound(Ep, E) + E.rank() * Ep.rank() + 4 +
                     extra_precision.value_or(0);
    RawHom lo = hom_at(Ep, E, base);
    RawHom hi = hom_at(Ep, E, base + 4);
    h.dim = static_cast<int>(lo.basis.size());
    h.basis = lo.basis;
    h.precision = lo.precision;
    if (hi.basis.size() != lo.basis.size()) h.certified = false;
    const int kp = Ep.rank();
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        bool ok = true;
        ThemeModule Ew = E.with_precision(h.precision);
        h.rank_profile.push_back(image_rank(Ew, h.basis[i], kp, &ok));
        if (!ok) h.certified = false;
        if (i < hi.basis.size()) {
            ModElem t = hi.basis[i];
            for (std::size_t j = 0; j < t.size(); ++j)
                if (!t[j].agrees_with(h.basis[i][j])) h.certified = false;
        }
    }
    return h;
}

std::vector<ModElem> endomorphism_images(const ThemeModule& E, const ModElem& y)
{
    const int k = E.rank();
    const int P = y[0].prec();
    ThemeModule Ew = E.with_precision(P);
    std::vector<ModElem> img(ix(k));
    img[ix(k - 1)] = y;
    for (int j = k - 1; j >= 1; --j) {
        const ModElem& up = img[ix(j)];
        ModElem t = Ew.sub(Ew.act_a(up), Ew.scale(E.lambda(j + 1), Ew.act_b(up)));
        img[ix(j - 1)] = Ew.mul_series(Ew.unit(j).invert_unit(), t);
    }
    return img;
}

ModElem apply_endomorphism(const std::vector<ModElem>& images, const ModElem& x)
{
    ModElem r(images[0].size(), BSeries::zero(images[0][0].prec()));
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += x[j] * images[j][i];
    return r;
}

EndInfo end_dimension(const ThemeModule& E)
{
    EndInfo info;
    HomSpace h = hom_space(E, E);
    info.dim = h.dim;
    info.certified = h.certified;
    const int k = E.rank();
    if (h.dim != k || k < 2) return info;
    for (const auto& y : h.basis)
        if (top_index(y) == k - 1) {
            info.nilpotent = y;
            break;
        }
    if (!info.nilpotent) {
        info.certified = false;
        return info;
    }
    auto phi0 = endomorphism_images(E, *info.nilpotent);
    std::vector<ModElem> power = phi0;
    for (int i = 1; i <= k; ++i) {
        bool ok = true;
        int r = series_rank(power, &ok);
        info.power_ranks.push_back(r);
        if (!ok || r != k - i) info.certified = false;
        std::vector<ModElem> next;
        for (const auto& v : power) next.push_back(apply_endomorphism(phi0, v));
        power = std::move(next);
    }
    return info;
}

StabilityReport is_stable(const ThemeModule& E)
{
    StabilityReport rep;
    const int k = E.rank();
    EndInfo info = end_dimension(E);
    rep.method_a = info.dim == k;
    rep.end_dim = info.dim;
    rep.certified = info.certified;
    if (rep.method_a && info.nilpotent) rep.witness = info.nilpotent;

    const int Mx = default_xi_precision(E);
    for (int extra : {0, 4, 8}) {
        XiElement phi = realize_in_xi(E, Mx + extra);
        SpanBasis sb = span_rank(a_orbit(phi, k));
        rep.method_b = membership(f_shift(phi, E.lambda_bar()), sb);
        if (rep.method_b != Verdict::uncertain) break;
    }
    if (rep.method_b == Verdict::uncertain) {
        rep.certified = false;
        rep.stable = rep.method_a;
        return rep;
    }
    bool b = rep.method_b == Verdict::yes;
    if (b != rep.method_a)
        throw MethodDisagreement(std::string("endomorphism count says ") + (rep.method_a ? "stable" : "unstable") +
                                 " but the monodromy test says " + (b ? "stable" : "unstable"));
    rep.stable = b;
    return rep;
}

InjectionReport injection_exists(const ThemeModule& Ep, const ThemeModule& E)
{
    InjectionReport rep;
    const int k = E.rank();
    if (Ep.rank() != k) throw InputError("injection test needs themes of equal rank");
    if (class_of(Ep.lambda(1)) != class_of(E.lambda(1))) {
        rep.obstruction = "exponent classes differ";
        return rep;
    }
    for (int j = 1; j <= k; ++j)
        if (Ep.lambda(j) < E.lambda(j)) {
            rep.obstruction = "mu_" + std::to_string(j) + " < lambda_" + std::to_string(j);
            return rep;
        }
    HomSpace h = hom_space(Ep, E);
    rep.certified = h.certified;
    const int target = as_int(Ep.lambda(k) - E.lambda(k));
    for (const auto& y : h.basis) {
        Valuation v = y[ix(k - 1)].valuation();
        if (v.exact && v.value == target) {
            rep.exists = true;
            rep.witness = y;
            return rep;
        }
    }
    rep.obstruction = "no morphism has e_k coefficient of valuation " + std::to_string(target);
    return rep;
}

int ext1_at(const ThemeModule& Ep, const ThemeModule& E, int M)
{
    const int k = E.rank();
    ThemeModule Ew = E.with_precision(M);
    FactorChain P = Ep.chain();
    for (std::size_t j = 0; j < P.units.size(); ++j) P.units[j] = Ep.presentation().unit(static_cast<int>(j) + 1, M);
    QMatrix A(k * M, k * M);
    for (int j = 1; j <= k; ++j)
        for (int n = 0; n < M; ++n) {
            ModElem x = Ew.zero();
            x[ix(j - 1)] = BSeries::monomial(n, 1, M);
            ModElem y = apply_chain(P, x, Ew);
            for (int i = 1; i <= k; ++i)
                for (int d = 0; d < M; ++d) A((i - 1) * M + d, (j - 1) * M + n) = y[ix(i - 1)].coeff(d);
        }
    return k * M - rank(A);
}

ExtDims ext_dims(const ThemeModule& Ep, const ThemeModule& E)
{
    ExtDims d;
    HomSpace h = hom_space(Ep, E);
    d.hom = h.dim;
    d.certified = h.certified;
    const int M = std::max(E.precision(), Ep.precision()) + resonance_bound(Ep, E);
    d.precision = M;
    d.ext1 = ext1_at(Ep, E, M);
    if (ext1_at(Ep, E, M + 4) != d.ext1) d.certified = false;
    if (d.ext1 - d.hom != E.rank() * Ep.rank())
        throw EulerViolation("dim Ext1 - dim Hom = " + std::to_string(d.ext1 - d.hom) + " but the rank product is " +
                             std::to_string(E.rank() * Ep.rank()));
    return d;
}

}  // namespace theme_lab
