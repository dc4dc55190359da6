#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "runs/bounds.hpp"
#include "runs/exact.hpp"
#include "runs/matching.hpp"
#include "runs/model.hpp"
#include "runs/pmf.hpp"
#include "runs/pseudobinomial.hpp"
#include "runs/stein.hpp"
#include "runs/tables.hpp"
#include "runs/tvlab.hpp"

namespace {

using namespace runs;

// ---------------------------------------------------------------------------
// shared spec flags
// ---------------------------------------------------------------------------

struct SpecFlags {
    int k1 = 1;
    int k2 = 1;
    long n = 0;
    double p = -1.0;
    double q = -1.0;
    std::vector<double> probs;

    bool has_p() const { return p >= 0.0; }
    bool has_q() const { return q >= 0.0; }
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
    cmd->add_option("--k1", f.k1, "failure run length k1")
        ->required()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--k2", f.k2, "success run length k2")
        ->required()
        ->check(CLI::Range(1, 64));
    cmd->add_option("--n", f.n, "number of trials")->check(CLI::Range(1L, 100000000L));
    auto* p = cmd->add_option("--p", f.p, "common success probability")
                  ->check(CLI::Range(0.0, 1.0));
    auto* q = cmd->add_option("--q", f.q, "common failure probability (1-p)")
                  ->check(CLI::Range(0.0, 1.0));
    auto* v = cmd->add_option("--probs", f.probs,
                              "per-trial success probabilities, comma separated")
                  ->delimiter(',');
    p->excludes(q);
    p->excludes(v);
    q->excludes(v);
}

RunsSpec build_spec(const SpecFlags& f) {
    if (!f.probs.empty()) {
        for (double v : f.probs) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument(
                    "--probs entries must lie in [0,1]");
            }
        }
        if (f.n != 0 && f.n != static_cast<long>(f.probs.size())) {
            throw std::invalid_argument(
                "--n disagrees with the number of --probs entries");
        }
        return RunsSpec::with_probs(f.k1, f.k2, f.probs);
    }
    if (f.has_p() == f.has_q()) {
        throw std::invalid_argument(
            "exactly one of --p, --q, --probs is required");
    }
    if (f.n <= 0) throw std::invalid_argument("--n is required");
    const double p = f.has_p() ? f.p : 1.0 - f.q;
    return RunsSpec::iid(f.k1, f.k2, f.n, p);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int run_table(int id, const std::string& format, int precision,
              const std::string& out_path) {
    std::ofstream file;
    std::ostream& os = open_output(out_path, file);
    const TableResult t = make_table(id);

    std::ostringstream dev;
    dev << std::scientific << std::setprecision(2)
        << "max abs deviation (fixed cells) = " << t.max_abs_deviation()
        << "; max rel deviation (sci cells) = " << t.max_rel_deviation_sci();

    if (format == "csv") {
        os << t.render(TableFormat::Csv, precision);
        os << "# " << dev.str() << '\n';
    } else if (format == "markdown") {
        os << t.render(TableFormat::Markdown, precision);
        os << '\n' << dev.str() << '\n';
    } else {
        os << t.render(TableFormat::Json, precision) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// pmf
// ---------------------------------------------------------------------------

int run_pmf(const SpecFlags& flags, const std::string& method, bool circular,
            int precision, const std::string& out_path) {
    const RunsSpec spec = build_spec(flags);
    if (circular && method != "dp" && method != "brute-force") {
        throw std::invalid_argument(
            "--circular requires --method dp or brute-force");
    }
    Pmf pmf;
    if (method == "recursive") {
        pmf = pmf_recursive(spec);
    } else if (method == "closed-form") {
        pmf = pmf_closed_form(spec);
    } else if (method == "brute-force") {
        pmf = pmf_bruteforce(spec, circular);
    } else {
        pmf = pmf_dp(spec, circular);
    }
    std::ofstream file;
    std::ostream& os = open_output(out_path, file);
    pmf.write_csv(os, precision);
    return 0;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

int run_bounds(const SpecFlags& flags, const std::string& preset_flag,
               double alpha_flag, double p_check_flag,
               const std::string& poisson_variant,
               const std::vector<std::string>& only,
               const std::string& format, int precision,
               const std::string& out_path) {
    const RunsSpec spec = build_spec(flags);

    MatchResult m1;
    if (alpha_flag > 0.0) {
        m1 = match_one_fix_alpha(spec, alpha_flag);
    } else if (p_check_flag > 0.0) {
        m1 = match_one_fix_p(spec, p_check_flag);
    } else {
        const AlphaPreset preset = preset_flag == "n/(3k)"
                                       ? AlphaPreset::NOver3K
                                       : AlphaPreset::NOverK;
        m1 = match_one_fix_alpha(spec, preset_alpha(spec, preset));
    }

    std::vector<BoundReport> reports;
    auto keep = [&reports](auto&& make) {
        try {
            reports.push_back(make());
        } catch (const std::invalid_argument&) {
        } catch (const std::domain_error&) {
        }
    };

    const PoissonVariant pv = poisson_variant == "printed"
                                  ? PoissonVariant::Printed
                                  : PoissonVariant::Table;
    keep([&] { return bound_poisson(spec, pv); });
    keep([&] { return bound_thm21(spec, m1); });
    keep([&] { return bound_cor41(spec, m1); });
    keep([&] { return bound_thm22(spec); });
    keep([&] { return bound_cor42(spec, match_two_iid(spec)); });
    keep([&] { return bound_thm31(spec, m1); });
    keep([&] { return bound_prop24(spec); });
    keep([&] { return bound_barbour(spec); });
    try {
        const auto gs = bound_gs_1k(spec);
        reports.push_back(gs.first);
        reports.push_back(gs.second);
    } catch (const std::invalid_argument&) {
    } catch (const std::domain_error&) {
    }
    keep([&] { return bound_runs11(spec, Runs11Variant::OneParam, m1); });
    keep([&] { return bound_runs11(spec, Runs11Variant::TwoParam); });
    keep([&] { return bound_thm33(spec); });
    try {
        const MatchResult m2 = match_two_M(spec);
        for (int tier = 1; tier <= 3; ++tier) {
            keep([&] { return bound_thm32(spec, m2, tier); });
        }
    } catch (const std::invalid_argument&) {
    } catch (const std::domain_error&) {
    }

    if (!only.empty()) {
        std::vector<BoundReport> filtered;
        for (auto& r : reports) {
            if (std::find(only.begin(), only.end(), r.name) != only.end()) {
                filtered.push_back(std::move(r));
            }
        }
        if (filtered.empty()) {
            throw std::invalid_argument(
                "--bound matched none of the applicable bounds");
        }
        reports = std::move(filtered);
    }

    std::ofstream file;
    std::ostream& os = open_output(out_path, file);

    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            arr.push_back(nlohmann::ordered_json::parse(r.to_json()));
        }
        os << arr.dump(2) << '\n';
        return 0;
    }

    os << "# " << spec.describe() << '\n';
    os << "# matching: alpha = " << std::setprecision(10) << m1.alpha
       << ", p_check = " << m1.p_check << " (" << matching_name(m1.convention)
       << ")\n";
    for (const auto& r : reports) {
        os << std::left << std::setw(16) << r.name << ' ' << std::fixed
           << std::setprecision(precision) << r.value;
        os.unsetf(std::ios::floatfield);
        if (r.all_preconditions_met()) {
            os << "  hypotheses: ok";
        } else {
            os << "  hypotheses failed:";
            for (const auto& [cond, ok] : r.preconditions) {
                if (!ok) os << " [" << cond << ']';
            }
        }
        for (const auto& note : r.notes) os << "  {" << note << '}';
        os << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

double max_pmf_diff(const Pmf& a, const Pmf& b) {
    const long lo = std::min(a.offset, b.offset);
    const long hi = std::max(a.max_support(), b.max_support());
    double worst = 0.0;
    for (long m = lo; m <= hi; ++m) {
        worst = std::max(worst, std::abs(a.prob(m) - b.prob(m)));
    }
    return worst;
}

const std::vector<std::pair<int, int>>& verify_shapes() {
    static const std::vector<std::pair<int, int>> shapes = {
        {1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}};
    return shapes;
}

bool verify_oracle(std::ostream& os) {
    double worst = 0.0;
    long specs = 0;
    for (auto [k1, k2] : verify_shapes()) {
        for (long n : {8L, 12L, 16L}) {
            for (double p : {0.2, 0.5, 0.8}) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, p);
                const Pmf a = pmf_recursive(spec);
                const Pmf b = pmf_closed_form(spec);
                const Pmf c = pmf_dp(spec);
                const Pmf d = pmf_bruteforce(spec);
                worst = std::max({worst, max_pmf_diff(a, b), max_pmf_diff(a, c),
                                  max_pmf_diff(a, d)});
                if (n == 12) {
                    const Pmf cc = pmf_dp(spec, true);
                    const Pmf cd = pmf_bruteforce(spec, true);
                    worst = std::max(worst, max_pmf_diff(cc, cd));
                }
                ++specs;
            }
        }
    }
    const bool ok = worst <= 1e-10;
    os << (ok ? "PASS" : "FAIL") << ": oracle — four pmf routes agree over "
       << specs << " specs, max deviation " << std::scientific
       << std::setprecision(2) << worst << '\n';
    return ok;
}

bool verify_stein(std::ostream& os) {
    std::mt19937_64 rng(987654321);
    double worst_a0 = 0.0;
    for (const auto& [alpha, p_check] :
         std::vector<std::pair<double, double>>{
             {6.2, 0.038275}, {6.2, 0.33}, {10.0, 0.5}, {3.7, 0.72}}) {
        const PseudoBinomial pb{alpha, p_check};
        for (int i = 0; i < 25; ++i) {
            const TestFunction g = random_test_function(pb.floor_alpha(), rng);
            worst_a0 = std::max(worst_a0,
                                std::abs(stein_identity_A0(pb, g).value));
        }
    }
    double worst_a1 = 0.0;
    for (const auto& [k1, k2, n] :
         std::vector<std::tuple<int, int, long>>{{1, 1, 8}, {2, 1, 12},
                                                 {3, 2, 15}}) {
        const RunsSpec spec = RunsSpec::iid(k1, k2, n, k1 == 3 ? 0.75 : 0.4);
        for (int i = 0; i < 5; ++i) {
            const TestFunction g = random_test_function(spec.max_count(), rng);
            worst_a1 = std::max(worst_a1,
                                std::abs(stein_identity_A1(spec, g).value));
        }
    }
    const bool ok = worst_a0 <= 1e-12 && worst_a1 <= 1e-10;
    os << (ok ? "PASS" : "FAIL")
       << ": stein — characterizing identities, max |E[A0 g]| = "
       << std::scientific << std::setprecision(2) << worst_a0
       << ", max |E[A1 g]| = " << worst_a1 << '\n';
    return ok;
}

bool verify_dominance(std::ostream& os) {
    long rows = 0, violations = 0;
    double worst_slack = 1.0;
    for (auto [k1, k2] : verify_shapes()) {
        for (long n = 10; n <= 18; ++n) {
            for (int qi = 1; qi <= 9; ++qi) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, 1.0 - qi / 10.0);
                MatchResult one;
                try {
                    one = match_one_fix_alpha(
                        spec, preset_alpha(spec, AlphaPreset::NOverK));
                } catch (const std::exception&) {
                    continue;
                }
                const TvReport rep = compare_all(spec, one);
                for (const auto& row : rep.rows) {
                    if (!row.flags_met) continue;
                    ++rows;
                    worst_slack = std::min(worst_slack, row.slack);
                    if (row.slack < -1e-10) ++violations;
                }
            }
        }
    }
    const bool ok = violations == 0;
    os << (ok ? "PASS" : "FAIL") << ": dominance — " << rows
       << " flag-satisfied bound rows vs exact distances, " << violations
       << " violations, smallest slack " << std::scientific
       << std::setprecision(2) << worst_slack << '\n';
    return ok;
}

bool verify_pgf(std::ostream& os) {
    const std::vector<double> t_grid = {-1.0, -0.6, -0.2, 0.2, 0.6, 1.0};
    double worst = 0.0;
    long specs = 0;
    for (auto [k1, k2] : verify_shapes()) {
        for (long n : {6L, 10L, 14L}) {
            if (n < k1 + k2) continue;
            for (double p : {0.3, 0.6}) {
                const RunsSpec spec = RunsSpec::iid(k1, k2, n, p);
                worst = std::max(worst,
                                 check_pgf_relations(spec, t_grid).max_residual());
                ++specs;
            }
        }
    }
    const bool ok = worst <= 1e-9;
    os << (ok ? "PASS" : "FAIL") << ": pgf — recurrence residuals over "
       << specs << " specs, max " << std::scientific << std::setprecision(2)
       << worst << '\n';
    return ok;
}

bool verify_tables(std::ostream& os) {
    bool ok = true;
    for (int id : table_ids()) {
        const TableResult t = make_table(id);
        const double abs_dev = t.max_abs_deviation();
        const double rel_dev = t.max_rel_deviation_sci();
        const bool table_ok = abs_dev <= 5e-7 && rel_dev <= 5e-2;
        ok = ok && table_ok;
        os << (table_ok ? "PASS" : "FAIL") << ": tables — table " << id << ", "
           << t.cells.size() << " cells, max abs deviation "
           << std::scientific << std::setprecision(2) << abs_dev
           << " (fixed), max rel deviation " << rel_dev << " (scientific)\n";
    }
    return ok;
}

int run_verify(const std::string& suite) {
    bool ok = true;
    if (suite == "oracle" || suite == "all") ok = verify_oracle(std::cout) && ok;
    if (suite == "stein" || suite == "all") ok = verify_stein(std::cout) && ok;
    if (suite == "dominance" || suite == "all")
        ok = verify_dominance(std::cout) && ok;
    if (suite == "pgf" || suite == "all") ok = verify_pgf(std::cout) && ok;
    if (suite == "tables" || suite == "all") ok = verify_tables(std::cout) && ok;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "runs — exact (k1,k2)-runs distributions, pseudo-binomial "
        "approximation bounds, and reference tables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "1.0.0");
    app.set_config("--config", "",
                   "plain-text key=value file with default flag values, one "
                   "[section] per subcommand; explicit flags win, and a "
                   "[section] may select the subcommand when none is named");

    // table ------------------------------------------------------------
    auto* table_cmd = app.add_subcommand(
        "table", "render a preset comparison table with reference deviations");
    table_cmd->configurable(true);
    table_cmd->fallthrough(true);
    int table_id = 0;
    std::string table_format = "csv";
    int table_precision = 7;
    std::string table_out;
    table_cmd->add_option("id,--id", table_id, "table id")
        ->required()
        ->check(CLI::IsMember({1, 2, 3}));
    table_cmd->add_option("--format", table_format, "csv | json | markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    table_cmd->add_option("--precision", table_precision,
                          "decimal places for rendered values")
        ->check(CLI::Range(1, 17));
    table_cmd->add_option("--out", table_out, "write output to this file");

    // pmf ---------------------------------------------------------------
    auto* pmf_cmd = app.add_subcommand(
        "pmf", "exact probability mass function of the window count");
    pmf_cmd->configurable(true);
    pmf_cmd->fallthrough(true);
    SpecFlags pmf_spec;
    add_spec_flags(pmf_cmd, pmf_spec);
    std::string pmf_method = "dp";
    bool pmf_circular = false;
    int pmf_precision = 7;
    std::string pmf_out;
    pmf_cmd->add_option("--method", pmf_method,
                        "recursive | closed-form | dp | brute-force")
        ->check(CLI::IsMember({"recursive", "closed-form", "dp", "brute-force"}));
    pmf_cmd->add_flag("--circular", pmf_circular,
                      "cyclic window count (dp and brute-force only)");
    pmf_cmd->add_option("--precision", pmf_precision,
                        "significant digits in the csv output")
        ->check(CLI::Range(1, 17));
    pmf_cmd->add_option("--out", pmf_out, "write output to this file");

    // bounds --------------------------------------------------------------
    auto* bounds_cmd = app.add_subcommand(
        "bounds", "total-variation error bounds for one spec");
    bounds_cmd->configurable(true);
    bounds_cmd->fallthrough(true);
    SpecFlags bounds_spec;
    add_spec_flags(bounds_cmd, bounds_spec);
    bool bounds_all = false;
    std::string bounds_preset = "n/k";
    double bounds_alpha = 0.0;
    double bounds_p_check = 0.0;
    std::string bounds_poisson = "table";
    std::vector<std::string> bounds_only;
    std::string bounds_format = "text";
    int bounds_precision = 7;
    std::string bounds_out;
    bounds_cmd->add_flag("--all", bounds_all,
                         "evaluate every applicable bound (default)");
    bounds_cmd
        ->add_option("--alpha-preset", bounds_preset,
                     "one-moment fit size parameter: n/k | n/(3k)")
        ->check(CLI::IsMember({"n/k", "n/(3k)"}));
    auto* alpha_opt = bounds_cmd->add_option(
        "--alpha", bounds_alpha, "explicit size parameter for the one-moment fit");
    auto* pcheck_opt = bounds_cmd->add_option(
        "--p-check", bounds_p_check,
        "fix the success parameter of the one-moment fit instead");
    alpha_opt->excludes(pcheck_opt);
    bounds_cmd
        ->add_option("--poisson-variant", bounds_poisson, "table | printed")
        ->check(CLI::IsMember({"table", "printed"}));
    bounds_cmd->add_option("--bound", bounds_only,
                           "restrict output to these bound names (repeatable)");
    bounds_cmd->add_option("--format", bounds_format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    bounds_cmd->add_option("--precision", bounds_precision,
                           "decimal places in text output")
        ->check(CLI::Range(1, 17));
    bounds_cmd->add_option("--out", bounds_out, "write output to this file");

    // verify -------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand(
        "verify", "run a property suite and report pass/fail");
    verify_cmd->fallthrough(true);
    std::string verify_suite;
    verify_cmd->add_option("suite", verify_suite,
                           "oracle | stein | dominance | pgf | tables | all")
        ->required()
        ->check(CLI::IsMember(
            {"oracle", "stein", "dominance", "pgf", "tables", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (table_cmd->parsed()) {
            return run_table(table_id, table_format, table_precision, table_out);
        }
        if (pmf_cmd->parsed()) {
            return run_pmf(pmf_spec, pmf_method, pmf_circular, pmf_precision,
                           pmf_out);
        }
        if (bounds_cmd->parsed()) {
            (void)bounds_all;  // --all is the default behaviour
            return run_bounds(bounds_spec, bounds_preset, bounds_alpha,
                              bounds_p_check, bounds_poisson, bounds_only,
                              bounds_format, bounds_precision, bounds_out);
        }
        if (verify_cmd->parsed()) {
            return run_verify(verify_suite);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
