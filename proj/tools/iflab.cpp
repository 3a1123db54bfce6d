// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Command-line front end. Every subcommand prints one table (CSV or JSON).
//
//   iflab bounds          --c C [--delta-c X | --r R | ranges] [--mac --n-t N] [--t T]
//   iflab fig-outage-2tx  [--c 14] [--delta-c-min --delta-c-max --steps] [--complement]
//   iflab fig-efficiency  [--c-min --c-max --steps] [--t 1|2] [--n-t 2|4] [--epsilon 0.01]
//   iflab mac --mode pdf|bounds|outage|ergodic [...]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iflab/iflab.hpp"
#include "report.hpp"

#ifndef IFLAB_VERSION
#define IFLAB_VERSION "0.0.0"
#endif

namespace {

using iflab::report::Cell;
using iflab::report::Table;

struct Common {
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 1;
    std::size_t trials = 10'000;
    std::string search = "lll+permutations";
    int workers = 1;
};

// Collects per-cell failures so one bad cell does not abort the table.
struct Failures {
    std::vector<std::string> cells;

    template <class F>
    Cell guard(const std::string& where, F&& f)
    {
        try {
            return Cell{f()};
        } catch (const std::exception& e) {
            cells.push_back(where + ": " + e.what());
            return Cell{};
        }
    }
};

std::vector<double> linspace(double lo, double hi, int steps)
{
    if (steps < 1)
        throw iflab::domain_error("--steps must be >= 1");
    if (steps == 1)
        return {lo};
    std::vector<double> v;
    for (int i = 0; i < steps; ++i)
        v.push_back(lo + (hi - lo) * i / (steps - 1));
    return v;
}

std::string fmt(double v) { return iflab::report::format_number(v); }

void base_metadata(Table& t, const std::string& command, const Common& c, bool stochastic)
{
    t.add_meta("iflab", IFLAB_VERSION);
    t.add_meta("command", command);
    t.add_meta("seed", std::to_string(c.seed));
    t.add_meta("trials", stochastic ? std::to_string(c.trials) : "0");
    t.add_meta("search", c.search);
    t.add_meta("units", "bits/complex-channel-use");
}

iflab::SearchConfig search_config(const Common& c)
{
    iflab::SearchConfig s;
    s.method = iflab::parse_search_method(c.search);
    return s;
}

int emit(const Table& t, const Common& c, const std::string& stem, const Failures& fails)
{
    std::ostringstream buf;
    if (c.format == "json")
        iflab::report::write_json(buf, t);
    else
        iflab::report::write_csv(buf, t);

    std::string path = c.output;
    if (path.empty()) {
        if (const char* dir = std::getenv("IFLAB_OUTPUT_DIR"); dir && *dir)
            path = (std::filesystem::path(dir) / (stem + (c.format == "json" ? ".json" : ".csv"))).string();
    }
    if (path.empty() || path == "-") {
        std::cout << buf.str();
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "iflab: cannot open " << path << " for writing\n";
            return 2;
        }
        f << buf.str();
    }
    if (!fails.cells.empty()) {
        std::cerr << "iflab: " << fails.cells.size() << " cell(s) failed:\n";
        for (const auto& s : fails.cells)
            std::cerr << "  " << s << '\n';
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
    double c = 0.0;
    std::optional<double> delta_c, r;
    double dc_min = 0.5, dc_max = 10.0;
    std::optional<double> r_min, r_max;
    int steps = 16;
    bool mac = false;
    int n_t = 2;
    int t = 1;
    int n_dim = 4;
    std::size_t thm3_samples = 1'000'000;
};

int cmd_bounds(const BoundsArgs& a, const Common& c)
{
    Table t;
    Failures fails;
    base_metadata(t, "bounds", c, false);
    t.add_meta("c", fmt(a.c));
    if (a.mac) {
        if (a.n_t < 2)
            throw iflab::domain_error("--n-t must be >= 2 with --mac");
        std::vector<double> rs;
        if (a.r)
            rs = {*a.r};
        else
            rs = linspace(a.r_min.value_or(a.c / a.steps), a.r_max.value_or(a.c), a.steps);
        t.add_meta("n_t", std::to_string(a.n_t));
        t.columns = {"r", "c", "n_t"};
        if (a.n_t == 2)
            t.columns.push_back("thm4");
        for (int k = 1; k <= a.n_t; ++k)
            t.columns.push_back("p_k" + std::to_string(k));
        t.columns.insert(t.columns.end(), {"thm5_lower", "thm5_upper"});
        for (double r : rs) {
            auto& row = t.new_row();
            row[0] = r;
            row[1] = a.c;
            row[2] = static_cast<long long>(a.n_t);
            const std::string where = "r=" + fmt(r);
            if (a.n_t == 2)
                row[t.col("thm4")] = fails.guard(where + " thm4", [&] { return iflab::thm4_exact(a.c, r).value; });
            for (int k = 1; k <= a.n_t; ++k)
                row[t.col("p_k" + std::to_string(k))] =
                    fails.guard(where + " p_k", [&] { return iflab::mac_subset_outage(k, a.n_t, r, a.c).value; });
            try {
                const auto b = iflab::thm5_bounds(a.n_t, r, a.c);
                row[t.col("thm5_lower")] = b.lower.value;
                row[t.col("thm5_upper")] = b.upper.value;
            } catch (const std::exception& e) {
                fails.cells.push_back(where + " thm5: " + e.what());
            }
        }
        return emit(t, c, "bounds-mac", fails);
    }

    std::vector<double> gaps;
    if (a.delta_c)
        gaps = {*a.delta_c};
    else if (a.r)
        gaps = {a.c - *a.r};
    else
        gaps = linspace(a.dc_min, a.dc_max, a.steps);
    t.add_meta("t", std::to_string(a.t));
    t.add_meta("n_dim", std::to_string(a.n_dim));
    t.add_meta("rho2_range", "[0,2^(C/2)-1]");
    t.add_meta("rho2_range_alt", "[0,2^C/2]");
    t.columns = {"delta_c", "r", "thm1_simple", "thm1_tight", "thm2", "rho2_star", "thm3", "thm3_abs_error",
                 "thm3_method", "thm3_k"};
    iflab::Thm3Config q;
    q.mc_samples = a.thm3_samples;
    q.mc_seed = c.seed;
    for (double dc : gaps) {
        auto& row = t.new_row();
        const double r = a.c - dc;
        const std::string where = "delta_c=" + fmt(dc);
        row[0] = dc;
        row[1] = r;
        if (dc > 1.0)
            row[2] = fails.guard(where + " thm1_simple", [&] { return iflab::thm1_simple_upper(dc).value; });
        row[3] = fails.guard(where + " thm1_tight", [&] { return iflab::thm1_tight_upper(a.c, dc, a.n_dim).value; });
        row[4] = fails.guard(where + " thm2", [&] { return iflab::thm2_ml_wc_outage(dc).value; });
        if (r >= 0.0 && r < a.c)
            row[5] = fails.guard(where + " rho2_star", [&] { return iflab::rho2_star(a.c, r); });
        if (r >= 0.0) {
            try {
                const auto d = iflab::thm3_st_lower_detail(a.c, r, a.t, q);
                row[6] = d.bound.value;
                row[7] = d.bound.abs_error;
                row[8] = std::string(iflab::to_string(d.bound.method));
                row[9] = static_cast<long long>(d.k);
            } catch (const std::exception& e) {
                fails.cells.push_back(where + " thm3: " + e.what());
            }
        }
    }
    return emit(t, c, "bounds", fails);
}

// ---------------------------------------------------------------- fig-outage-2tx

struct OutageArgs {
    double c = 14.0;
    double dc_min = 0.5, dc_max = 10.0;
    int steps = 16;
    int n_r = 2;
    std::string receiver = "if-sic";
    bool complement = false;
};

int cmd_fig_outage(const OutageArgs& a, const Common& c)
{
    Table t;
    Failures fails;
    base_metadata(t, "fig-outage-2tx", c, true);
    t.add_meta("c", fmt(a.c));
    t.add_meta("receiver", a.receiver);
    t.add_meta("precoder", "cue");
    t.add_meta("rho2_range", "[0,2^(C/2)-1]");
    t.add_meta("complement", a.complement ? "true" : "false");
    t.columns = {"delta_c", "thm1_simple", "thm1_tight", "thm2", "empirical", "empirical_std_err", "worst_rho2"};

    iflab::ExperimentSpec spec;
    spec.n_r = a.n_r;
    spec.n_t = 2;
    spec.capacity_bits = a.c;
    spec.receiver = iflab::parse_receiver(a.receiver);
    spec.trials = c.trials;
    spec.seed = c.seed;
    spec.search = search_config(c);
    spec.workers = c.workers;
    const auto gaps = linspace(a.dc_min, a.dc_max, a.steps);
    std::vector<double> rates;
    for (double dc : gaps)
        rates.push_back(a.c - dc);
    const iflab::RateSurface surface(spec, iflab::member_grid(spec, iflab::rho2_star_points(spec, rates)));

    auto flip = [&](double p) { return a.complement ? 1.0 - p : p; };
    for (double dc : gaps) {
        auto& row = t.new_row();
        const std::string where = "delta_c=" + fmt(dc);
        row[0] = dc;
        if (dc > 1.0)
            row[1] = fails.guard(where + " thm1_simple", [&] { return flip(iflab::thm1_simple_upper(dc).value); });
        row[2] = fails.guard(where + " thm1_tight", [&] { return flip(iflab::thm1_tight_upper(a.c, dc).value); });
        row[3] = fails.guard(where + " thm2", [&] { return flip(iflab::thm2_ml_wc_outage(dc).value); });
        if (a.c - dc >= 0.0) {
            const auto w = surface.worst(a.c - dc);
            row[4] = flip(w.estimate.p_hat);
            row[5] = w.estimate.std_err;
            row[6] = w.rho2;
        } else {
            fails.cells.push_back(where + " empirical: delta_c exceeds C");
        }
    }
    return emit(t, c, "fig-outage-2tx", fails);
}

// ---------------------------------------------------------------- fig-efficiency

struct EfficiencyArgs {
    double c_min = 4.0, c_max = 20.0;
    int steps = 9;
    int t = 1;
    int n_t = 2;
    int n_r = 0; // 0: n_r = n_t
    double epsilon = 0.01;
    bool physical_cue = false;
};

int cmd_fig_efficiency(const EfficiencyArgs& a, const Common& c)
{
    if (a.t != 1 && a.t != 2)
        throw iflab::domain_error("--t must be 1 or 2");
    if (a.n_t < 2)
        throw iflab::domain_error("--n-t must be >= 2");
    Table t;
    Failures fails;
    base_metadata(t, "fig-efficiency", c, true);
    t.add_meta("epsilon", fmt(a.epsilon));
    t.add_meta("t", std::to_string(a.t));
    t.add_meta("n_t", std::to_string(a.n_t));
    t.add_meta("physical_cue", a.physical_cue ? "true" : "false");
    t.add_meta("rho2_range", "[0,2^(C/n_t)-1]");

    struct Column {
        std::string name;
        iflab::PrecoderLabel label;
        iflab::Receiver rx;
    };
    std::vector<Column> cols{{"cue_ml", iflab::PrecoderLabel::cue, iflab::Receiver::ml},
                             {"cue_if_sic", iflab::PrecoderLabel::cue, iflab::Receiver::if_sic}};
    if (a.t == 2) {
        cols.push_back({"cue_st_ml", iflab::PrecoderLabel::cue_st, iflab::Receiver::ml});
        cols.push_back({"cue_st_if_sic", iflab::PrecoderLabel::cue_st, iflab::Receiver::if_sic});
        if (a.n_t == 2) {
            cols.push_back({"alamouti_ml", iflab::PrecoderLabel::alamouti, iflab::Receiver::ml});
            cols.push_back({"alamouti_if_sic", iflab::PrecoderLabel::alamouti, iflab::Receiver::if_sic});
            cols.push_back({"golden_ml", iflab::PrecoderLabel::golden, iflab::Receiver::ml});
            cols.push_back({"golden_if_sic", iflab::PrecoderLabel::golden, iflab::Receiver::if_sic});
        }
    }
    t.columns = {"c"};
    if (a.n_t == 2)
        t.columns.push_back("ml_closed_form");
    for (const auto& col : cols)
        t.columns.push_back(col.name);
    t.columns.push_back("saturated");

    for (double cap : linspace(a.c_min, a.c_max, a.steps)) {
        auto& row = t.new_row();
        row[0] = cap;
        const std::string where = "c=" + fmt(cap);
        if (a.n_t == 2)
            row[1] = fails.guard(where + " ml_closed_form", [&] {
                return std::clamp(1.0 - iflab::ml_gap_for_epsilon(a.epsilon) / cap, 0.0, 1.0);
            });
        std::string saturated;
        for (const auto& col : cols) {
            row[t.col(col.name)] = fails.guard(where + " " + col.name, [&] {
                iflab::ExperimentSpec spec;
                spec.n_t = a.n_t;
                spec.n_r = a.n_r > 0 ? a.n_r : a.n_t;
                spec.t = a.t;
                spec.capacity_bits = cap;
                spec.precoder = col.label;
                spec.physical_cue = a.physical_cue && col.label != iflab::PrecoderLabel::cue &&
                                    col.label != iflab::PrecoderLabel::cue_st;
                spec.receiver = col.rx;
                spec.trials = c.trials;
                spec.seed = c.seed;
                spec.search = search_config(c);
                spec.workers = c.workers;
                const auto e = iflab::efficiency(spec, a.epsilon);
                if (e.saturated)
                    saturated += (saturated.empty() ? "" : ";") + col.name;
                return e.eta;
            });
        }
        row[t.col("saturated")] = saturated;
    }
    return emit(t, c, "fig-efficiency", fails);
}

// ---------------------------------------------------------------- mac

struct MacArgs {
    std::string mode;
    std::optional<double> c;
    std::optional<int> n_t;
    int bins = 40;
    std::optional<int> steps;
    double c_min = 2.0, c_max = 20.0;
    std::string receiver = "if-sic";
};

int cmd_mac(const MacArgs& a, const Common& c)
{
    Table t;
    Failures fails;
    base_metadata(t, "mac", c, true);
    t.add_meta("mode", a.mode);
    const auto sc = search_config(c);

    if (a.mode == "pdf") {
        const double cap = a.c.value_or(2.0);
        const int n_t = a.n_t.value_or(2);
        t.add_meta("c", fmt(cap));
        t.add_meta("n_t", std::to_string(n_t));
        const auto pdf = iflab::sym_capacity_pdf_data(n_t, cap, c.trials, a.bins, {c.seed, 0});
        t.columns = {"bin_lo", "bin_hi", "density", "atom", "atom_std_err", "atom_closed_form"};
        for (std::size_t b = 0; b < pdf.density.size(); ++b) {
            auto& row = t.new_row();
            row[0] = pdf.edges[b];
            row[1] = pdf.edges[b + 1];
            row[2] = pdf.density[b];
            row[3] = pdf.atom;
            row[4] = pdf.atom_std_err;
            if (n_t == 2)
                row[5] = 1.0 - iflab::thm4_exact(cap, cap).value;
        }
        return emit(t, c, "mac-pdf", fails);
    }

    if (a.mode == "bounds") {
        const double cap = a.c.value_or(8.0);
        const int n_t = a.n_t.value_or(4);
        const int steps = a.steps.value_or(16);
        t.add_meta("c", fmt(cap));
        t.add_meta("n_t", std::to_string(n_t));
        t.columns = {"r", "thm5_lower", "thm5_upper", "empirical", "empirical_std_err"};
        iflab::MacSimSpec s;
        s.n_t = n_t;
        s.c = cap;
        s.receiver = iflab::Receiver::ml;
        s.trials = c.trials;
        s.seed = c.seed;
        s.workers = c.workers;
        const auto rates = iflab::mac_rate_samples(s);
        for (int i = 1; i <= steps; ++i) {
            const double r = cap * i / steps;
            auto& row = t.new_row();
            row[0] = r;
            const auto b = iflab::thm5_bounds(n_t, r, cap);
            row[1] = b.lower.value;
            row[2] = b.upper.value;
            const auto e = iflab::outage_from_samples(rates, r, s.receiver, sc.method, c.seed);
            row[3] = e.p_hat;
            row[4] = e.std_err;
        }
        return emit(t, c, "mac-bounds", fails);
    }

    std::vector<iflab::PrecoderLabel> labels{iflab::PrecoderLabel::none, iflab::PrecoderLabel::cue_st};
    const int n_t = a.n_t.value_or(2);
    if (n_t == 2)
        labels.push_back(iflab::PrecoderLabel::badr_belfiore);
    auto name = [](iflab::PrecoderLabel l) {
        std::string s(iflab::to_string(l));
        std::replace(s.begin(), s.end(), '-', '_');
        return s;
    };
    const auto rx = iflab::parse_receiver(a.receiver);

    if (a.mode == "outage") {
        const double cap = a.c.value_or(10.0);
        const int steps = a.steps.value_or(20);
        t.add_meta("c", fmt(cap));
        t.add_meta("n_t", std::to_string(n_t));
        t.add_meta("receiver", a.receiver);
        t.columns = {"r", "r_over_c"};
        if (n_t == 2)
            t.columns.push_back("ml_exact");
        t.columns.insert(t.columns.end(), {"ml_empirical", "ml_empirical_std_err"});
        std::vector<std::vector<double>> samples;
        for (auto l : labels) {
            const std::string base = std::string(iflab::to_string(rx)) + "_" + name(l);
            std::string col = base;
            std::replace(col.begin(), col.end(), '-', '_');
            t.columns.push_back(col);
            t.columns.push_back(col + "_std_err");
            iflab::MacSimSpec s{n_t, cap, l, rx, c.trials, c.seed, sc, c.workers};
            samples.push_back(iflab::mac_rate_samples(s));
        }
        iflab::MacSimSpec ms{n_t, cap, iflab::PrecoderLabel::none, iflab::Receiver::ml, c.trials, c.seed, sc, c.workers};
        const auto ml = iflab::mac_rate_samples(ms);
        for (int i = 1; i <= steps; ++i) {
            const double r = cap * i / steps;
            auto& row = t.new_row();
            std::size_t k = 0;
            row[k++] = r;
            row[k++] = r / cap;
            if (n_t == 2)
                row[k++] = iflab::thm4_exact(cap, r).value;
            const auto e = iflab::outage_from_samples(ml, r, iflab::Receiver::ml, sc.method, c.seed);
            row[k++] = e.p_hat;
            row[k++] = e.std_err;
            for (const auto& smp : samples) {
                const auto o = iflab::outage_from_samples(smp, r, rx, sc.method, c.seed);
                row[k++] = o.p_hat;
                row[k++] = o.std_err;
            }
        }
        return emit(t, c, "mac-outage", fails);
    }

    if (a.mode == "ergodic") {
        const int steps = a.steps.value_or(10);
        t.add_meta("n_t", std::to_string(n_t));
        t.add_meta("receiver", a.receiver);
        t.add_meta("fraction", "ratio-of-conditional-means");
        t.columns = {"c_sum", "mean_c_sym", "fraction_ml"};
        for (auto l : labels) {
            const std::string col = "fraction_" + std::string(iflab::to_string(rx)) + "_" + name(l);
            std::string clean = col;
            std::replace(clean.begin(), clean.end(), '-', '_');
            t.columns.push_back(clean);
            t.columns.push_back(clean + "_std_err");
        }
        const auto grid = linspace(a.c_min, a.c_max, steps);
        std::vector<std::vector<iflab::ErgodicRow>> per_label;
        for (auto l : labels) {
            iflab::MacSimSpec s{n_t, 0.0, l, rx, c.trials, c.seed, sc, c.workers};
            per_label.push_back(iflab::ergodic_fraction_data(s, grid));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto& row = t.new_row();
            std::size_t k = 0;
            row[k++] = grid[i];
            row[k++] = per_label.front()[i].mean_c_sym;
            row[k++] = 1.0;
            for (const auto& pl : per_label) {
                row[k++] = pl[i].fraction;
                row[k++] = pl[i].fraction_std_err;
            }
        }
        return emit(t, c, "mac-ergodic", fails);
    }
    throw iflab::domain_error("--mode must be pdf, bounds, outage or ergodic");
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "output file (default: stdout, or $IFLAB_OUTPUT_DIR/<command>.<ext>)");
    sub->add_option("--seed", c.seed, "base RNG seed");
    sub->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--search", c.search, "integer-matrix search: lll, lll+permutations, exhaustive")
        ->check(CLI::IsMember({"lll", "lll+permutations", "exhaustive"}));
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1, 256));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"iflab - integer-forcing outage laboratory"};
    app.set_version_flag("--version", std::string(IFLAB_VERSION));
    app.require_subcommand(1);
    Common common;

    BoundsArgs ba;
    auto* bounds = app.add_subcommand("bounds", "tabulate the closed-form and numerical bounds");
    add_common(bounds, common);
    bounds->add_option("--c", ba.c, "sum capacity / mutual information C (bits)")->required()->check(CLI::NonNegativeNumber);
    bounds->add_option("--delta-c", ba.delta_c, "single gap C - R")->check(CLI::NonNegativeNumber);
    bounds->add_option("--r", ba.r, "single target rate R")->check(CLI::NonNegativeNumber);
    bounds->add_option("--delta-c-min", ba.dc_min)->check(CLI::NonNegativeNumber);
    bounds->add_option("--delta-c-max", ba.dc_max)->check(CLI::NonNegativeNumber);
    bounds->add_option("--r-min", ba.r_min)->check(CLI::NonNegativeNumber);
    bounds->add_option("--r-max", ba.r_max)->check(CLI::NonNegativeNumber);
    bounds->add_option("--steps", ba.steps)->check(CLI::Range(1, 100000));
    bounds->add_flag("--mac", ba.mac, "MAC bounds (Lemma-1 terms, two-user law, union bracket)");
    bounds->add_option("--n-t", ba.n_t, "users / transmit antennas")->check(CLI::Range(2, 20));
    bounds->add_option("--t", ba.t, "time extensions for the space-time lower bound")->check(CLI::Range(1, 8));
    bounds->add_option("--n-dim", ba.n_dim, "integer-vector dimension of the tight upper bound")->check(CLI::Range(1, 8));
    bounds->add_option("--thm3-samples", ba.thm3_samples, "Jacobi samples when the space-time bound needs Monte Carlo")
        ->check(CLI::PositiveNumber);

    OutageArgs oa;
    auto* fig1 = app.add_subcommand("fig-outage-2tx", "worst-case outage vs gap for N_r x 2, with bounds");
    add_common(fig1, common);
    fig1->add_option("--c", oa.c)->check(CLI::PositiveNumber);
    fig1->add_option("--delta-c-min", oa.dc_min)->check(CLI::NonNegativeNumber);
    fig1->add_option("--delta-c-max", oa.dc_max)->check(CLI::NonNegativeNumber);
    fig1->add_option("--steps", oa.steps)->check(CLI::Range(1, 100000));
    fig1->add_option("--n-r", oa.n_r)->check(CLI::Range(2, 16));
    fig1->add_option("--receiver", oa.receiver)->check(CLI::IsMember({"if", "if-sic", "ml"}));
    fig1->add_flag("--complement", oa.complement, "report 1 - P instead of P");

    EfficiencyArgs ea;
    auto* fig2 = app.add_subcommand("fig-efficiency", "guaranteed efficiency at epsilon outage");
    add_common(fig2, common);
    fig2->add_option("--c-min", ea.c_min)->check(CLI::PositiveNumber);
    fig2->add_option("--c-max", ea.c_max)->check(CLI::PositiveNumber);
    fig2->add_option("--steps", ea.steps)->check(CLI::Range(1, 100000));
    fig2->add_option("--t", ea.t)->check(CLI::Range(1, 2));
    fig2->add_option("--n-t", ea.n_t)->check(CLI::Range(2, 4));
    fig2->add_option("--n-r", ea.n_r)->check(CLI::Range(0, 16));
    fig2->add_option("--epsilon", ea.epsilon)->check(CLI::Range(1e-9, 1.0 - 1e-9));
    fig2->add_flag("--physical-cue", ea.physical_cue, "also rotate the physical channel by a CUE draw (fixed codes)");

    MacArgs ma;
    auto* mac = app.add_subcommand("mac", "Rayleigh MAC experiments");
    add_common(mac, common);
    mac->add_option("--mode", ma.mode)->required()->check(CLI::IsMember({"pdf", "bounds", "outage", "ergodic"}));
    mac->add_option("--c", ma.c)->check(CLI::PositiveNumber);
    mac->add_option("--n-t", ma.n_t)->check(CLI::Range(2, 12));
    mac->add_option("--bins", ma.bins)->check(CLI::Range(1, 100000));
    mac->add_option("--steps", ma.steps)->check(CLI::Range(1, 100000));
    mac->add_option("--c-min", ma.c_min)->check(CLI::PositiveNumber);
    mac->add_option("--c-max", ma.c_max)->check(CLI::PositiveNumber);
    mac->add_option("--receiver", ma.receiver)->check(CLI::IsMember({"if", "if-sic"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (bounds->parsed())
            return cmd_bounds(ba, common);
        if (fig1->parsed())
            return cmd_fig_outage(oa, common);
        if (fig2->parsed())
            return cmd_fig_efficiency(ea, common);
        if (mac->parsed())
            return cmd_mac(ma, common);
    } catch (const iflab::domain_error& e) {
        std::cerr << "iflab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "iflab: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
