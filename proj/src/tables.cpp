#include "runs/tables.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "runs/bounds.hpp"
#include "runs/model.hpp"

namespace runs {

namespace {

// ---------------------------------------------------------------------------
// Embedded reference values.  Layout is [block][row][column]: blocks are the
// (k1,k2,n) groups in display order, rows follow kRows, columns follow the
// q grid.  Values are the published fixed-point prints (7 decimals); entries
// flagged in the *Sci masks were published in scientific notation with two
// significant figures and only support a relative comparison.
//
// Conventions per table (recorded here because the prints don't say):
//   table 1: one-moment rows fit alpha = n/(k1+k2); two-moment rows fit both
//            moments of the linear count (alpha implied).
//   tables 2 and 3: one-moment rows fit alpha = n/(3(k1+k2)).
//   Poisson rows: rate = (n-k1-k2+1) * a, independent of any alpha choice.
// ---------------------------------------------------------------------------

constexpr TableRow kRows[5] = {TableRow::Poisson, TableRow::OneIid,
                               TableRow::OneNonIid, TableRow::TwoIid,
                               TableRow::TwoNonIid};

struct Block {
    int k1;
    int k2;
    long n;
};

// --- table 1: (3,2), n in {31,61,91}, q = 0.25..0.30, alpha = n/k ---
constexpr double kT1Q[6] = {0.25, 0.26, 0.27, 0.28, 0.29, 0.30};
constexpr Block kT1Blocks[3] = {{3, 2, 31}, {3, 2, 61}, {3, 2, 91}};
constexpr double kT1[3][5][6] = {
    {{0.0153348, 0.0181913, 0.0213664, 0.0248639, 0.0286838, 0.0328219},
     {0.4721530, 0.5317490, 0.5970280, 0.6684950, 0.7467080, 0.8322930},
     {0.1261160, 0.1386300, 0.1516780, 0.1652310, 0.1792620, 0.1937360},
     {0.0583356, 0.0721317, 0.0885016, 0.1078180, 0.1304990, 0.1570070},
     {0.1495820, 0.1727680, 0.1985490, 0.2270710, 0.2584660, 0.2928510}},
    {{0.0299556, 0.0351495, 0.0408266, 0.0469741, 0.0535729, 0.0605977},
     {0.4108820, 0.4628570, 0.5198110, 0.5821880, 0.6504820, 0.7252430},
     {0.1273990, 0.1400810, 0.1533110, 0.1670630, 0.1813080, 0.1960130},
     {0.0490745, 0.0606956, 0.0744900, 0.0907739, 0.1099010, 0.1322660},
     {0.1457540, 0.1681780, 0.1930980, 0.2206580, 0.2509850, 0.2841950}},
    {{0.0412000, 0.0478718, 0.0550563, 0.0627206, 0.0708255, 0.0793268},
     {0.3921610, 0.4418050, 0.4962110, 0.5558060, 0.6210630, 0.6925100},
     {0.1278320, 0.1405700, 0.1538620, 0.1676820, 0.1819990, 0.1967830},
     {0.0463871, 0.0573762, 0.0704216, 0.0858233, 0.1039160, 0.1250750},
     {0.1446020, 0.1667960, 0.1914580, 0.2187260, 0.2487320, 0.2815870}}};
constexpr bool kT1Sci[3][5][6] = {};  // every table-1 entry is fixed-point

// --- table 2: (3,2), n in {31,61,91}, q = 0.01..0.06, alpha = n/(3k),
//     one-moment rows only ---
constexpr TableRow kT2Rows[2] = {TableRow::OneIid, TableRow::OneNonIid};
constexpr double kT2Q[6] = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06};
constexpr Block kT2Blocks[3] = {{3, 2, 31}, {3, 2, 61}, {3, 2, 91}};
constexpr double kT2[3][2][6] = {
    {{8.0e-6, 0.0000627, 0.0002074, 0.0004821, 0.0009233, 0.0015651},
     {0.0000223, 0.0001752, 0.0005794, 0.0013458, 0.0025759, 0.0043624}},
    {{0.0000112, 0.0000875, 0.0002896, 0.0006730, 0.0012894, 0.0021867},
     {0.0000229, 0.0001798, 0.0005947, 0.0013813, 0.0026440, 0.0044781}},
    {{0.0000121, 0.0000948, 0.0003136, 0.0007290, 0.0013967, 0.0023688},
     {0.0000231, 0.0001813, 0.0005998, 0.0013932, 0.0026667, 0.0045166}}};
constexpr bool kT2Sci[3][2][6] = {
    {{true, false, false, false, false, false},
     {false, false, false, false, false, false}},
    {{false, false, false, false, false, false},
     {false, false, false, false, false, false}},
    {{false, false, false, false, false, false},
     {false, false, false, false, false, false}}};

// --- table 3: (3,4,365), (5,2,730), (5,5,1095), q sweep, alpha = n/(3k) ---
constexpr double kT3Q[5] = {0.15, 0.35, 0.55, 0.75, 0.95};
constexpr Block kT3Blocks[3] = {{3, 4, 365}, {5, 2, 730}, {5, 5, 1095}};
constexpr double kT3[3][5][5] = {
    {{0.0106386, 0.0922811, 0.0803029, 0.0094809, 1.3e-7},
     {0.0336230, 0.2021910, 0.1713050, 0.0312758, 0.0000945},
     {0.0629099, 0.3127940, 0.2732590, 0.0587023, 0.0001844},
     {0.0028427, 0.0723263, 0.0548598, 0.0024745, 2.4e-8},
     {0.0265899, 0.2033260, 0.1694180, 0.0245356, 0.0000644}},
    {{0.0000276, 0.0229588, 0.1318160, 0.1919450, 0.0188653},
     {0.0009945, 0.0446873, 0.3303570, 0.7008820, 0.0384026},
     {0.0018997, 0.0804657, 0.4474560, 0.7422330, 0.0697126},
     {2.5e-6, 0.0044406, 0.1442230, 0.4291400, 0.0033308},
     {0.0006634, 0.0351373, 0.3231050, 0.6348640, 0.0296551}},
    {{0.0000229, 0.0055807, 0.0111605, 0.0009754, 1.2e-9},
     {0.0008036, 0.0151079, 0.0235355, 0.0056003, 5.7e-6},
     {0.0016672, 0.0306796, 0.0472107, 0.0115347, 0.0000119},
     {2.0e-6, 0.0006854, 0.0016252, 0.0000967, 1.0e-10},
     {0.0006106, 0.0123165, 0.0198645, 0.0043648, 4.4e-6}}};
constexpr bool kT3Sci[3][5][5] = {
    {{false, false, false, false, true},
     {false, false, false, false, false},
     {false, false, false, false, false},
     {false, false, false, false, true},
     {false, false, false, false, false}},
    {{false, false, false, false, false},
     {false, false, false, false, false},
     {false, false, false, false, false},
     {true, false, false, false, false},
     {false, false, false, false, false}},
    {{false, false, false, false, true},
     {false, false, false, false, true},
     {false, false, false, false, false},
     {true, false, false, false, true},
     {false, false, false, false, true}}};

double cell_value(TableRow row, const RunsSpec& spec, AlphaPreset preset) {
    switch (row) {
        case TableRow::Poisson:
            return bound_poisson(spec, PoissonVariant::Table).value;
        case TableRow::OneIid:
            return bound_thm21(
                       spec, match_one_fix_alpha(spec, preset_alpha(spec, preset)))
                .value;
        case TableRow::OneNonIid:
            return bound_cor41(
                       spec, match_one_fix_alpha(spec, preset_alpha(spec, preset)))
                .value;
        case TableRow::TwoIid:
            return bound_thm22(spec).value;
        case TableRow::TwoNonIid:
            return bound_cor42(spec, match_two_iid(spec)).value;
    }
    throw std::logic_error("cell_value: unknown row");
}

template <std::size_t NB, std::size_t NR, std::size_t NQ>
void fill_cells(TableResult& out, const Block (&blocks)[NB],
                const TableRow (&rows)[NR], const double (&qs)[NQ],
                const double (&golden)[NB][NR][NQ],
                const bool (&sci)[NB][NR][NQ]) {
    for (std::size_t b = 0; b < NB; ++b) {
        for (std::size_t r = 0; r < NR; ++r) {
            for (std::size_t c = 0; c < NQ; ++c) {
                const RunsSpec spec{blocks[b].k1, blocks[b].k2, blocks[b].n,
                                    {1.0 - qs[c]}};
                TableCell cell;
                cell.row = rows[r];
                cell.k1 = blocks[b].k1;
                cell.k2 = blocks[b].k2;
                cell.n = blocks[b].n;
                cell.q = qs[c];
                cell.value = cell_value(rows[r], spec, out.preset);
                cell.reference = golden[b][r][c];
                cell.scientific = sci[b][r][c];
                out.cells.push_back(cell);
            }
        }
    }
}

std::string format_fixed(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

std::string format_reference(const TableCell& cell) {
    if (cell.scientific) {
        std::ostringstream os;
        os << std::scientific << std::setprecision(1) << cell.reference;
        return os.str();
    }
    return format_fixed(cell.reference, 7);
}

}  // namespace

std::string table_row_label(TableRow row) {
    switch (row) {
        case TableRow::Poisson: return "Poisson";
        case TableRow::OneIid: return "PB (One iid)";
        case TableRow::OneNonIid: return "PB (One non-iid)";
        case TableRow::TwoIid: return "PB (Two iid)";
        case TableRow::TwoNonIid: return "PB (Two non-iid)";
    }
    throw std::logic_error("table_row_label: unknown row");
}

double TableCell::abs_deviation() const { return std::abs(value - reference); }

double TableCell::rel_deviation() const {
    return std::abs(value - reference) / reference;
}

double TableResult::max_abs_deviation() const {
    double worst = 0.0;
    for (const auto& c : cells)
        if (!c.scientific) worst = std::max(worst, c.abs_deviation());
    return worst;
}

double TableResult::max_rel_deviation_sci() const {
    double worst = 0.0;
    for (const auto& c : cells)
        if (c.scientific) worst = std::max(worst, c.rel_deviation());
    return worst;
}

TableResult make_table(int id) {
    TableResult out;
    out.id = id;
    switch (id) {
        case 1:
            out.title =
                "Poisson and pseudo-binomial bounds, (3,2) windows, alpha = "
                "n/(k1+k2)";
            out.preset = AlphaPreset::NOverK;
            fill_cells(out, kT1Blocks, kRows, kT1Q, kT1, kT1Sci);
            break;
        case 2:
            out.title =
                "One-moment bounds at small q, (3,2) windows, alpha = "
                "n/(3(k1+k2))";
            out.preset = AlphaPreset::NOver3K;
            fill_cells(out, kT2Blocks, kT2Rows, kT2Q, kT2, kT2Sci);
            break;
        case 3:
            out.title =
                "Bounds for (3,4), (5,2), (5,5) windows at n = 365, 730, 1095, "
                "alpha = n/(3(k1+k2))";
            out.preset = AlphaPreset::NOver3K;
            fill_cells(out, kT3Blocks, kRows, kT3Q, kT3, kT3Sci);
            break;
        default:
            throw std::invalid_argument("make_table: unknown table id " +
                                        std::to_string(id));
    }
    return out;
}

std::vector<int> table_ids() { return {1, 2, 3}; }

std::string TableResult::render(TableFormat format, int precision) const {
    std::ostringstream os;
    switch (format) {
        case TableFormat::Csv: {
            os << "approximation,k1,k2,n,q,value,reference,abs_deviation\n";
            for (const auto& c : cells) {
                os << table_row_label(c.row) << ',' << c.k1 << ',' << c.k2 << ','
                   << c.n << ',' << format_fixed(c.q, 2) << ','
                   << format_fixed(c.value, precision) << ','
                   << format_reference(c) << ','
                   << std::scientific << std::setprecision(2)
                   << c.abs_deviation() << '\n';
                os.unsetf(std::ios::floatfield);
            }
            break;
        }
        case TableFormat::Markdown: {
            // one wide row per (block, approximation); columns follow the q grid
            std::vector<double> qs;
            for (const auto& c : cells)
                if (std::find(qs.begin(), qs.end(), c.q) == qs.end())
                    qs.push_back(c.q);
            os << "| approximation | (k1,k2) | n |";
            for (double q : qs) os << " q=" << format_fixed(q, 2) << " |";
            os << '\n' << "|---|---|---|";
            for (std::size_t i = 0; i < qs.size(); ++i) os << "---|";
            os << '\n';
            for (std::size_t i = 0; i < cells.size(); i += qs.size()) {
                const auto& first = cells[i];
                os << "| " << table_row_label(first.row) << " | (" << first.k1
                   << ',' << first.k2 << ") | " << first.n << " |";
                for (std::size_t c = 0; c < qs.size(); ++c)
                    os << ' ' << format_fixed(cells[i + c].value, precision)
                       << " |";
                os << '\n';
            }
            break;
        }
        case TableFormat::Json: {
            nlohmann::ordered_json j;
            j["id"] = id;
            j["title"] = title;
            j["alpha_preset"] = preset_name(preset);
            j["cells"] = nlohmann::ordered_json::array();
            for (const auto& c : cells) {
                nlohmann::ordered_json jc;
                jc["approximation"] = table_row_label(c.row);
                jc["k1"] = c.k1;
                jc["k2"] = c.k2;
                jc["n"] = c.n;
                jc["q"] = c.q;
                jc["value"] = c.value;
                jc["reference"] = c.reference;
                jc["scientific"] = c.scientific;
                j["cells"].push_back(std::move(jc));
            }
            j["max_abs_deviation"] = max_abs_deviation();
            j["max_rel_deviation_sci"] = max_rel_deviation_sci();
            os << j.dump(2);
            break;
        }
    }
    return os.str();
}

}  // namespace runs
