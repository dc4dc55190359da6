#pragma once

#include <string>
#include <vector>

#include "runs/matching.hpp"

namespace runs {

enum class TableFormat { Csv, Json, Markdown };

// The five approximation rows the shipped tables tabulate.  "One"/"Two" is
// the number of matched moments; "iid" rows use the identical-trials bound,
// "non-iid" rows the per-trial bound specialised to identical inputs.
enum class TableRow { Poisson, OneIid, OneNonIid, TwoIid, TwoNonIid };

std::string table_row_label(TableRow row);

// One evaluated cell next to its embedded reference value.  Reference values
// are printed to 7 decimal places except the handful typeset in scientific
// notation with 2 significant figures (scientific = true), where only a
// relative comparison is meaningful.
struct TableCell {
    TableRow row;
    int k1 = 0;
    int k2 = 0;
    long n = 0;
    double q = 0.0;
    double value = 0.0;
    double reference = 0.0;
    bool scientific = false;

    double abs_deviation() const;
    double rel_deviation() const;
};

struct TableResult {
    int id = 0;
    std::string title;
    AlphaPreset preset = AlphaPreset::NOverK;
    std::vector<TableCell> cells;

    // Largest |value - reference| over the fixed-decimal cells, and largest
    // relative deviation over the scientific-notation cells.
    double max_abs_deviation() const;
    double max_rel_deviation_sci() const;

    std::string render(TableFormat format, int precision = 7) const;
};

// Preset grids 1..3:
//   1: (3,2), n in {31,61,91}, q in {0.25..0.30}, alpha = n/k, all five rows
//   2: (3,2), n in {31,61,91}, q in {0.01..0.06}, alpha = n/(3k), one-moment rows
//   3: (3,4,n=365), (5,2,n=730), (5,5,n=1095), q in {0.15,...,0.95}, alpha = n/(3k)
TableResult make_table(int id);

std::vector<int> table_ids();

}  // namespace runs
