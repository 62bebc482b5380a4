#pragma once

#include <vector>

#include "theme_lab/series.hpp"

namespace theme_lab {

using SeriesRow = std::vector<BSeries>;

enum class Verdict { yes, no, uncertain };
const char* to_string(Verdict v);

struct PivotEntry {
    int column = 0;
    int valuation = 0;
};

/*
 * Row reduction over the valuation ring Q[[b]] with minimal-valuation pivoting.
 * Pivot rows are kept in pivot order; later pivot rows vanish at earlier pivot columns.
 */
struct Elimination {
    std::vector<PivotEntry> pivots;
    std::vector<SeriesRow> rows;
    /* rows left over once no admissible pivot remains */
    std::vector<SeriesRow> residual;
    int input_precision = 0;
    int margin = 4;
    bool certified = true;

    int rank() const { return static_cast<int>(pivots.size()); }
    std::vector<int> divisor_valuations() const;
};

/*
 * column_rank[c]: tie-break priority of column c (smaller wins).
 * Columns with negative rank are never used as pivots.
 */
Elimination eliminate(std::vector<SeriesRow> rows, const std::vector<int>& column_rank, int margin = 4);

/* Valuations of successive pivots when columns are forced in the given order. */
std::vector<int> ordered_pivot_valuations(std::vector<SeriesRow> rows, const std::vector<int>& column_order, bool* certified = nullptr);

/* Reduces y by the pivots; yes if y lies in the Q[[b]]-span. */
Verdict reduce_membership(const Elimination& e, SeriesRow y);

/* Rank over Q((b)) of a square or rectangular series matrix given by rows. */
int series_rank(const std::vector<SeriesRow>& rows, bool* certified = nullptr);

}  // namespace theme_lab
