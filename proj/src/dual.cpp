#include <algorithm>

#include "theme_lab/errors.hpp"
#include "theme_lab/qlinalg.hpp"
#include "theme_lab/theme.hpp"

namespace theme_lab {

namespace {

std::size_t ix(int j) { return static_cast<std::size_t>(j); }

/* Module on the covectors f_1..f_k with a f_j = sum_i A[i][j] f_i. */
struct DualHost {
    using Elem = ModElem;
    std::vector<std::vector<BSeries>> A;

    ModElem act_a(const ModElem& x) const
    {
        const std::size_t k = x.size();
        ModElem y;
        for (std::size_t i = 0; i < k; ++i) {
            BSeries v = x[i].b2_derivative();
            for (std::size_t j = 0; j < k; ++j) v += A[i][j] * x[j];
            y.push_back(std::move(v));
        }
        return y;
    }
};

/* Solves sum_j c_j v_j = w with an invertible series matrix. */
std::vector<BSeries> solve_unit_system(std::vector<SeriesRow> cols, SeriesRow w)
{
    const int k = static_cast<int>(cols.size());
    /* row i: coefficients v_0[i] .. v_{k-1}[i] | w[i] */
    std::vector<SeriesRow> m(ix(k));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) m[ix(i)].push_back(cols[ix(j)][ix(i)]);
        m[ix(i)].push_back(w[ix(i)]);
    }
    for (int c = 0; c < k; ++c) {
        int piv = -1;
        for (int r = c; r < k; ++r)
            if (m[ix(r)][ix(c)].is_unit()) {
                piv = r;
                break;
            }
        if (piv < 0) throw PrecisionUncertified("orbit matrix is not invertible over the series ring");
        std::swap(m[ix(c)], m[ix(piv)]);
        BSeries inv = m[ix(c)][ix(c)].invert_unit();
        for (auto& s : m[ix(c)]) s = inv * s;
        for (int r = 0; r < k; ++r) {
            if (r == c || m[ix(r)][ix(c)].is_zero()) continue;
            BSeries f = m[ix(r)][ix(c)];
            for (int cc = 0; cc <= k; ++cc) m[ix(r)][ix(cc)] -= f * m[ix(c)][ix(cc)];
        }
    }
    std::vector<BSeries> out;
    for (int i = 0; i < k; ++i) out.push_back(m[ix(i)][ix(k)]);
    return out;
}

std::vector<Rational> poly_mul_linear(const std::vector<Rational>& p, const Rational& shift)
{
    /* p(t) * (t + shift) */
    std::vector<Rational> r(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + 1] += p[i];
        r[i] += shift * p[i];
    }
    return r;
}

Rational poly_eval(const std::vector<Rational>& p, const Rational& t)
{
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
    return acc;
}

std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r)
{
    std::vector<Rational> q(p.size() - 1);
    Rational carry = 0;
    for (std::size_t i = p.size(); i-- > 1;) {
        carry = carry * r + p[i];
        q[i - 1] = carry;
    }
    return q;
}

std::vector<mpz_class> divisors(mpz_class n)
{
    n = abs(n);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    return out;
}

/* All rational roots with multiplicity (rational root theorem). */
std::vector<Rational> rational_roots(std::vector<Rational> p)
{
    std::vector<Rational> roots;
    while (p.size() > 1 && sgn(p[0]) == 0) {
        roots.push_back(0);
        p.erase(p.begin());
    }
    bool progress = true;
    while (p.size() > 1 && progress) {
        progress = false;
        mpz_class l = 1;
        for (const auto& c : p) l = lcm(l, c.get_den());
        mpz_class lead = Rational(p.back() * l).get_num(), cst = Rational(p.front() * l).get_num();
        for (const auto& a : divisors(cst)) {
            for (const auto& b : divisors(lead)) {
                for (int s : {1, -1}) {
                    Rational cand(a * s, b);
                    cand.canonicalize();
                    if (sgn(poly_eval(p, cand)) == 0) {
                        roots.push_back(cand);
                        p = deflate(p, cand);
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
            if (progress) break;
        }
        while (p.size() > 1 && sgn(p[0]) == 0) {
            roots.push_back(0);
            p.erase(p.begin());
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

std::vector<XiElement> solve_companion(const std::vector<BSeries>& c, const Rational& lambda_bar, int N, int M)
{
    check_block_key(lambda_bar);
    const int k = static_cast<int>(c.size());
    const int P = M + 2 * k;
    const int rows = N + 1;
    const int neq = rows * (M + k);
    const int nunk = rows * M;
    QMatrix sys(neq, nunk);
    for (int h = 0; h <= N; ++h)
        for (int m = 0; m < M; ++m) {
            XiElement x = XiElement::basis(lambda_bar, h, m, N, P);
            std::vector<XiElement> pw = a_orbit(x, k + 1);
            XiElement img = pw[ix(k)];
            for (int j = 0; j < k; ++j) img = img - c[ix(j)] * pw[ix(j)];
            const XiBlock& b = img.block(lambda_bar);
            for (int hh = 0; hh <= N; ++hh)
                for (int d = 0; d < M + k; ++d) sys(hh * (M + k) + d, h * M + m) = b.cell(hh, d);
        }
    std::vector<XiElement> out;
    for (const auto& v : nullspace(sys)) {
        XiElement x = XiElement::zero(lambda_bar, N, M);
        XiBlock& b = x.blocks.begin()->second;
        for (int h = 0; h <= N; ++h)
            for (int m = 0; m < M; ++m) b.rows[ix(h)].set(m, v[ix(h * M + m)]);
        out.push_back(std::move(x));
    }
    return out;
}

FullDual full_dual(const ThemeModule& E, const Rational& delta)
{
    const int k = E.rank();
    if (k < 1 || k > 3) throw InputError("the full dual computation is available for ranks 1 to 3");
    if (delta <= E.lambda(k) + k - 1)
        throw ShiftTooSmall("delta must exceed lambda_k + k - 1 = " + Rational(E.lambda(k) + k - 1).get_str());

    const Rational lb = class_of(delta - E.lambda(1));
    const int Mxi = E.precision() + static_cast<int>(Rational(delta - E.lambda(1) - lb).get_num().get_si()) + 2 * k + 4;
    const int Md = Mxi + k + 2;
    ThemeModule W = E.with_precision(Md);

    FullDual fd;
    DualHost host;
    host.A.assign(ix(k), std::vector<BSeries>(ix(k), BSeries::zero(Md)));
    for (int i = 1; i <= k; ++i) {
        ModElem ae = W.act_a(W.basis(i));
        for (int j = 1; j <= k; ++j) {
            BSeries v = -ae[ix(j - 1)];
            if (i == j) v += BSeries::monomial(1, delta, Md);
            host.A[ix(i - 1)][ix(j - 1)] = v;
        }
    }
    fd.a_matrix = host.A;

    std::vector<ModElem> orbit;
    for (int g = 1; g <= k && fd.generator_index == 0; ++g) {
        ModElem x(ix(k), BSeries::zero(Md));
        x[ix(g - 1)] = BSeries::one(Md);
        std::vector<ModElem> orb{x};
        for (int i = 1; i <= k; ++i) orb.push_back(host.act_a(orb.back()));
        std::vector<SeriesRow> rows(orb.begin(), orb.begin() + k);
        std::vector<int> order(ix(k));
        for (int i = 0; i < k; ++i) order[ix(i)] = i;
        Elimination e = eliminate(rows, order);
        auto vals = e.divisor_valuations();
        bool basis = e.rank() == k && std::all_of(vals.begin(), vals.end(), [](int v) { return v == 0; });
        if (basis) {
            fd.generator_index = g;
            orbit = std::move(orb);
        }
    }
    if (fd.generator_index == 0) throw PrecisionUncertified("no dual basis covector generates the dual");

    std::vector<SeriesRow> cols(orbit.begin(), orbit.begin() + k);
    fd.companion = solve_unit_system(cols, orbit[ix(k)]);

    /* indicial polynomial of a^k - sum c_j a^j on the leading b-power */
    std::vector<Rational> R{1};
    for (int i = 0; i < k; ++i) R = poly_mul_linear(R, i);
    for (int j = 0; j < k; ++j) {
        std::vector<Rational> term{fd.companion[ix(j)].coeff(k - j)};
        for (int i = 0; i < j; ++i) term = poly_mul_linear(term, i);
        for (std::size_t n = 0; n < term.size(); ++n) R[n] -= term[n];
    }
    fd.bernstein_roots = rational_roots(R);
    if (static_cast<int>(fd.bernstein_roots.size()) != k) throw Mismatch("dual indicial polynomial has irrational roots");
    std::vector<Rational> shifted;
    for (const auto& t : fd.bernstein_roots) shifted.push_back(t + k);
    std::sort(shifted.begin(), shifted.end());
    fd.invariants_from_roots.lambda1 = shifted[0] - 1;
    for (int j = 1; j < k; ++j)
        fd.invariants_from_roots.p.push_back(static_cast<int>(Rational(shifted[ix(j)] - shifted[ix(j - 1)]).get_num().get_si()));

    std::vector<BSeries> c = fd.companion;
    auto sols = solve_companion(c, lb, k - 1, Mxi);
    if (static_cast<int>(sols.size()) != k) fd.certified = false;

    XiElement psi;
    bool found = false;
    std::vector<XiElement> candidates = sols;
    if (!sols.empty()) {
        XiElement sum = sols[0];
        for (std::size_t i = 1; i < sols.size(); ++i) sum = sum + sols[i];
        candidates.push_back(sum);
    }
    for (const auto& cand : candidates) {
        if (cand.log_degree() != k - 1) continue;
        SpanBasis sb = span_rank(a_orbit(cand, k));
        if (sb.rank() == k) {
            psi = cand;
            found = true;
            break;
        }
    }
    if (!found) throw PrecisionUncertified("no solution of the dual relation realizes the dual theme");
    JHFiltration jh = jordan_holder(psi);
    if (!jh.certified) fd.certified = false;
    fd.presentation = jh.presentation();
    return fd;
}

}  // namespace theme_lab
