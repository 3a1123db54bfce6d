// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Single-antenna Rayleigh multiple-access channel: symmetric-rate capacity,
// its law conditioned on the sum capacity, and distributed IF where every
// user precodes only its own symbols.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "iflab/ensembles.hpp"
#include "iflab/errors.hpp"
#include "iflab/integer_forcing.hpp"
#include "iflab/matrix_core.hpp"
#include "iflab/montecarlo.hpp"
#include "iflab/precoders.hpp"

namespace iflab {

struct MacChannel {
    CVector h; // per-user gains, SNR absorbed
    double snr = 1.0;
};

inline MacChannel sample_rayleigh_mac(int n_t, double snr, Engine& eng)
{
    if (n_t < 1)
        throw domain_error("sample_rayleigh_mac: n_t must be >= 1");
    if (!(snr > 0.0))
        throw domain_error("sample_rayleigh_mac: snr must be > 0");
    return {complex_gaussian(n_t, 1, eng).col(0) * std::sqrt(snr), snr};
}

inline MacChannel sample_rayleigh_mac(int n_t, double snr, RngSeed rng)
{
    Engine eng = make_engine(rng);
    return sample_rayleigh_mac(n_t, snr, eng);
}

struct MacRates {
    double c_sum = 0.0;
    double c_sym = 0.0;
    std::uint32_t bottleneck_subset = 0; // bit i set <=> user i in the minimising subset
};

inline constexpr int kMaxMacUsers = 20;

// c_sym = min_S (n/|S|) log2(1 + sum_{i in S} g_i). `c_sum` (when >= 0) replaces
// the computed full-set value; the first minimising subset in mask order wins.
inline MacRates mac_rates_from_gains(const std::vector<double>& g, double c_sum = -1.0)
{
    const auto n = static_cast<int>(g.size());
    if (n < 1 || n > kMaxMacUsers)
        throw shape_error("mac_rates: user count out of range");
    const std::uint32_t full = (1u << n) - 1u;
    MacRates out;
    double total = 0.0;
    for (double v : g)
        total += v;
    out.c_sum = c_sum >= 0.0 ? c_sum : std::log2(1.0 + total);
    out.c_sym = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        double s = 0.0;
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                s += g[static_cast<std::size_t>(i)];
                ++k;
            }
        const double v = mask == full ? out.c_sum : static_cast<double>(n) / k * std::log2(1.0 + s);
        if (v < out.c_sym) {
            out.c_sym = v;
            out.bottleneck_subset = mask;
        }
    }
    return out;
}

inline MacRates mac_rates(const MacChannel& ch)
{
    std::vector<double> g(static_cast<std::size_t>(ch.h.size()));
    for (Eigen::Index i = 0; i < ch.h.size(); ++i)
        g[static_cast<std::size_t>(i)] = std::norm(ch.h(i));
    return mac_rates_from_gains(g);
}

namespace detail {

inline MacRates given_c_rates(const CVector& h, double c)
{
    std::vector<double> g(static_cast<std::size_t>(h.size()));
    for (Eigen::Index i = 0; i < h.size(); ++i)
        g[static_cast<std::size_t>(i)] = std::norm(h(i));
    return mac_rates_from_gains(g, c);
}

} // namespace detail

// P(C_sym < R | C) from sphere draws; trial i uses RngSeed{rng.seed, i}.
inline OutageEstimate sym_outage_given_c(int n_t, double c, double r, std::size_t trials, RngSeed rng)
{
    if (!(r >= 0.0))
        throw domain_error("sym_outage_given_c: r must be >= 0");
    if (trials < 1)
        throw domain_error("sym_outage_given_c: trials must be >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const CVector h = sample_sphere_given_c(n_t, c, RngSeed{rng.seed, i});
        if (detail::given_c_rates(h, c).c_sym < r)
            ++hits;
    }
    return OutageEstimate::from_counts(hits, trials, Receiver::ml, SearchMethod::lll_permutations, rng.seed);
}

struct SymCapacityPdf {
    std::vector<double> edges;   // bins + 1 edges over [0, C]
    std::vector<double> density; // continuous part, integrates to 1 - atom
    double atom = 0.0;           // P(C_sym = C | C)
    double atom_std_err = 0.0;
    std::size_t trials = 0;
};

// Histogram of C_sym | C plus the point mass at C (bottleneck = full set).
inline SymCapacityPdf sym_capacity_pdf_data(int n_t, double c, std::size_t trials, int bins, RngSeed rng)
{
    if (bins < 1 || trials < 1)
        throw domain_error("sym_capacity_pdf_data: need bins >= 1 and trials >= 1");
    if (!(c > 0.0))
        throw domain_error("sym_capacity_pdf_data: c must be > 0");
    SymCapacityPdf out;
    out.trials = trials;
    const double width = c / bins;
    for (int b = 0; b <= bins; ++b)
        out.edges.push_back(c * b / bins);
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    const std::uint32_t full = (1u << n_t) - 1u;
    std::size_t atoms = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const CVector h = sample_sphere_given_c(n_t, c, RngSeed{rng.seed, i});
        const MacRates m = detail::given_c_rates(h, c);
        if (m.bottleneck_subset == full) {
            ++atoms;
            continue;
        }
        const auto b = std::clamp(static_cast<int>(m.c_sym / width), 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const auto n = static_cast<double>(trials);
    for (std::size_t cnt : counts)
        out.density.push_back(static_cast<double>(cnt) / (n * width));
    out.atom = static_cast<double>(atoms) / n;
    out.atom_std_err = std::sqrt(out.atom * (1.0 - out.atom) / n);
    return out;
}

// Real effective channel of the distributed scheme: user i contributes
// complex_to_real(h_i I_T) map_i. Columns are reordered to [Re of all symbols;
// Im of all symbols] so the result follows the library-wide real ordering.
inline RMatrix distributed_effective_channel(const MacChannel& ch, const std::vector<Precoder>& precoders)
{
    if (precoders.size() != static_cast<std::size_t>(ch.h.size()))
        throw shape_error("distributed IF: need one precoder per user");
    if (precoders.empty())
        throw shape_error("distributed IF: no users");
    const int t = precoders.front().t;
    Eigen::Index half = 0;
    for (const auto& p : precoders) {
        if (p.t != t)
            throw shape_error("distributed IF: precoders disagree on T");
        if (p.n_t != 1 || p.map.rows() != 2 * t || p.map.cols() % 2 != 0)
            throw shape_error("distributed IF: per-user precoders must be single-antenna maps");
        half += p.map.cols() / 2;
    }
    RMatrix out(2 * t, 2 * half);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < precoders.size(); ++i) {
        const Precoder& p = precoders[i];
        const CMatrix hi = CMatrix::Identity(t, t) * ch.h(static_cast<Eigen::Index>(i));
        const RMatrix block = p.power_gain * (complex_to_real(hi) * p.map);
        const Eigen::Index s = block.cols() / 2;
        out.middleCols(col, s) = block.leftCols(s);
        out.middleCols(half + col, s) = block.rightCols(s);
        col += s;
    }
    return out;
}

inline IfRateResult distributed_if_rate(const MacChannel& ch, const std::vector<Precoder>& precoders,
                                        const SearchConfig& cfg = {})
{
    const RMatrix h = distributed_effective_channel(ch, precoders);
    return if_sic_rate(h, precoders.front().t, cfg);
}

// Per-user precoders for a label: none (T = 1), cue-st (per-user 2-slot CUE) or
// badr-belfiore (two users only).
inline std::vector<Precoder> make_mac_precoders(PrecoderLabel l, int n_t, Engine& eng)
{
    std::vector<Precoder> out;
    switch (l) {
    case PrecoderLabel::none:
        for (int i = 0; i < n_t; ++i)
            out.push_back(identity_precoder(1, 1));
        return out;
    case PrecoderLabel::cue_st:
        for (int i = 0; i < n_t; ++i)
            out.push_back(cue_space_time(1, 2, eng));
        return out;
    case PrecoderLabel::badr_belfiore: {
        if (n_t != 2)
            throw domain_error("badr-belfiore precoding is defined for two users");
        auto [p1, p2] = badr_belfiore();
        out.push_back(p1);
        out.push_back(p2);
        return out;
    }
    default:
        throw domain_error("MAC precoder must be one of none, cue-st, badr-belfiore");
    }
}

struct MacSimSpec {
    int n_t = 2;
    double c = 10.0; // conditioned sum capacity
    PrecoderLabel precoder = PrecoderLabel::none;
    Receiver receiver = Receiver::if_sic;
    std::size_t trials = 10'000;
    std::uint64_t seed = 1;
    SearchConfig search{};
    int workers = 1;
};

// Rate of the receiver on trial i. The channel is drawn first so that every
// precoder label sees the same channel on the same trial.
inline double mac_trial_rate(const MacSimSpec& s, std::size_t i)
{
    Engine eng = make_engine({s.seed, i});
    const MacChannel ch{sample_sphere_given_c(s.n_t, s.c, eng), 1.0};
    if (s.receiver == Receiver::ml)
        return detail::given_c_rates(ch.h, s.c).c_sym;
    const auto pre = make_mac_precoders(s.precoder, s.n_t, eng);
    const RMatrix h = distributed_effective_channel(ch, pre);
    const int t = pre.front().t;
    if (s.receiver == Receiver::if_sic)
        return if_sic_rate(h, t, s.search).rate_bits;
    return if_plain_rate(h, t, s.search).rate_bits;
}

inline std::vector<double> mac_rate_samples(const MacSimSpec& s)
{
    if (s.trials < 1)
        throw domain_error("MAC simulation: trials must be >= 1");
    std::vector<double> out(s.trials);
    parallel_for(s.trials, s.workers, [&](std::size_t i) { out[i] = mac_trial_rate(s, i); });
    return out;
}

inline OutageEstimate outage_from_samples(const std::vector<double>& rates, double r, Receiver rx, SearchMethod sm,
                                          std::uint64_t seed)
{
    const auto hits = static_cast<std::size_t>(std::count_if(rates.begin(), rates.end(), [r](double v) { return v < r; }));
    return OutageEstimate::from_counts(hits, rates.size(), rx, sm, seed);
}

inline OutageEstimate mac_outage_given_c(const MacSimSpec& s, double r)
{
    return outage_from_samples(mac_rate_samples(s), r, s.receiver, s.search.method, s.seed);
}

struct ErgodicRow {
    double c_sum = 0.0;
    double mean_c_sym = 0.0;
    double mean_rate = 0.0;
    double fraction = 0.0; // mean_rate / mean_c_sym
    double fraction_std_err = 0.0;
};

// Ratio of conditional means E[rate | C] / E[C_sym | C] on a grid of sum
// capacities, each conditioned exactly through the sphere construction.
inline std::vector<ErgodicRow> ergodic_fraction_data(const MacSimSpec& base, const std::vector<double>& c_grid)
{
    std::vector<ErgodicRow> rows;
    for (double c : c_grid) {
        if (!(c > 0.0))
            throw domain_error("ergodic_fraction_data: sum capacities must be > 0");
        MacSimSpec s = base;
        s.c = c;
        const auto rate = mac_rate_samples(s);
        MacSimSpec m = s;
        m.receiver = Receiver::ml;
        const auto sym = mac_rate_samples(m);
        const auto n = static_cast<double>(s.trials);
        double mr = 0.0, ms = 0.0;
        for (std::size_t i = 0; i < s.trials; ++i) {
            mr += rate[i];
            ms += sym[i];
        }
        mr /= n;
        ms /= n;
        ErgodicRow row{c, ms, mr, ms > 0.0 ? mr / ms : 0.0, 0.0};
        if (ms > 0.0 && s.trials > 1) {
            // delta-method error of a ratio of means on paired samples
            double v = 0.0;
            for (std::size_t i = 0; i < s.trials; ++i) {
                const double d = rate[i] - row.fraction * sym[i];
                v += d * d;
            }
            row.fraction_std_err = std::sqrt(v / (n - 1.0) / n) / ms;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace iflab
