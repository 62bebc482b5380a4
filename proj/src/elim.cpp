#include "theme_lab/elim.hpp"

#include <algorithm>
#include <limits>

#include "theme_lab/errors.hpp"

namespace theme_lab {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::uncertain: return "uncertain";
    }
    return "uncertain";
}

std::vector<int> Elimination::divisor_valuations() const
{
    std::vector<int> v;
    for (const auto& p : pivots) v.push_back(p.valuation);
    return v;
}

static int row_precision(const SeriesRow& r)
{
    int m = std::numeric_limits<int>::max();
    for (const auto& s : r) m = std::min(m, s.prec());
    return m;
}

static void axpy(SeriesRow& y, const BSeries& coef, const SeriesRow& x)
{
    for (std::size_t c = 0; c < y.size(); ++c) y[c] -= coef * x[c];
}

Elimination eliminate(std::vector<SeriesRow> rows, const std::vector<int>& column_rank, int margin)
{
    Elimination e;
    e.margin = margin;
    e.input_precision = std::numeric_limits<int>::max();
    for (const auto& r : rows) e.input_precision = std::min(e.input_precision, row_precision(r));
    if (rows.empty()) e.input_precision = 0;
    const std::size_t ncols = column_rank.size();
    std::vector<char> col_used(ncols, 0);

    while (!rows.empty()) {
        int best_r = -1, best_c = -1, best_v = 0;
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < ncols; ++c) {
                if (col_used[c] || column_rank[c] < 0) continue;
                Valuation v = rows[r][c].valuation();
                if (!v.exact) continue;
                bool better = best_r < 0 || v.value < best_v ||
                              (v.value == best_v && column_rank[c] < column_rank[static_cast<std::size_t>(best_c)]);
                if (better) {
                    best_r = static_cast<int>(r);
                    best_c = static_cast<int>(c);
                    best_v = v.value;
                }
            }
        if (best_r < 0) break;
        SeriesRow piv = std::move(rows[static_cast<std::size_t>(best_r)]);
        rows.erase(rows.begin() + best_r);
        const BSeries& pc = piv[static_cast<std::size_t>(best_c)];
        for (auto& r : rows) {
            const BSeries& rc = r[static_cast<std::size_t>(best_c)];
            if (rc.is_zero()) continue;
            BSeries coef = rc.exact_div(pc);
            axpy(r, coef, piv);
        }
        col_used[static_cast<std::size_t>(best_c)] = 1;
        if (best_v >= e.input_precision - margin) e.certified = false;
        e.pivots.push_back({best_c, best_v});
        e.rows.push_back(std::move(piv));
    }
    int last = e.pivots.empty() ? 0 : e.pivots.back().valuation;
    for (const auto& r : rows)
        if (row_precision(r) < last + margin) e.certified = false;
    e.residual = std::move(rows);
    return e;
}

std::vector<int> ordered_pivot_valuations(std::vector<SeriesRow> rows, const std::vector<int>& column_order, bool* certified)
{
    std::vector<int> vals;
    bool ok = true;
    int input = std::numeric_limits<int>::max();
    for (const auto& r : rows) input = std::min(input, row_precision(r));
    for (int col : column_order) {
        int best = -1, best_v = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            Valuation v = rows[r][static_cast<std::size_t>(col)].valuation();
            if (v.exact && (best < 0 || v.value < best_v)) {
                best = static_cast<int>(r);
                best_v = v.value;
            }
        }
        if (best < 0) continue;
        SeriesRow piv = std::move(rows[static_cast<std::size_t>(best)]);
        rows.erase(rows.begin() + best);
        for (auto& r : rows) {
            const BSeries& rc = r[static_cast<std::size_t>(col)];
            if (rc.is_zero()) continue;
            axpy(r, rc.exact_div(piv[static_cast<std::size_t>(col)]), piv);
        }
        if (best_v >= input - 4) ok = false;
        vals.push_back(best_v);
    }
    if (certified) *certified = ok;
    return vals;
}

Verdict reduce_membership(const Elimination& e, SeriesRow y)
{
    const int limit = e.input_precision - e.margin;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        const auto& p = e.pivots[i];
        const BSeries& yc = y[static_cast<std::size_t>(p.column)];
        Valuation v = yc.valuation();
        if (!v.exact) continue;
        if (v.value < p.valuation) return v.value < limit ? Verdict::no : Verdict::uncertain;
        BSeries coef = yc.exact_div(e.rows[i][static_cast<std::size_t>(p.column)]);
        axpy(y, coef, e.rows[i]);
    }
    bool all_zero = true;
    for (const auto& s : y) {
        Valuation v = s.valuation();
        if (v.exact) {
            if (v.value < limit) return Verdict::no;
            all_zero = false;
        }
    }
    if (!all_zero) return Verdict::uncertain;
    if (row_precision(y) < e.margin) return Verdict::uncertain;
    return Verdict::yes;
}

int series_rank(const std::vector<SeriesRow>& rows, bool* certified)
{
    std::size_t ncols = rows.empty() ? 0 : rows[0].size();
    std::vector<int> order(ncols);
    for (std::size_t c = 0; c < ncols; ++c) order[c] = static_cast<int>(c);
    Elimination e = eliminate(rows, order);
    if (certified) *certified = e.certified;
    return e.rank();
}

}  // namespace theme_lab
