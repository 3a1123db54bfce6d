// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Monte Carlo engine for the compound MIMO channel: outage of a receiver
// under random (or fixed) precoding, worst case over the compound class,
// epsilon-outage rate and guaranteed efficiency.
//
// Trial i always draws from RngSeed{seed, i}, whatever the member, rate or
// receiver. Outage curves are therefore monotone in r sample by sample and
// receivers can be compared draw by draw.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "iflab/bounds.hpp"
#include "iflab/ensembles.hpp"
#include "iflab/errors.hpp"
#include "iflab/integer_forcing.hpp"
#include "iflab/matrix_core.hpp"
#include "iflab/precoders.hpp"

namespace iflab {

enum class Receiver { if_plain, if_sic, ml };

inline std::string_view to_string(Receiver r)
{
    switch (r) {
    case Receiver::if_plain: return "if";
    case Receiver::if_sic: return "if-sic";
    case Receiver::ml: return "ml";
    }
    return "?";
}

inline Receiver parse_receiver(std::string_view s)
{
    if (s == "if") return Receiver::if_plain;
    if (s == "if-sic") return Receiver::if_sic;
    if (s == "ml") return Receiver::ml;
    throw domain_error("unknown receiver '" + std::string(s) + "'");
}

struct OutageEstimate {
    double p_hat = 0.0;
    double std_err = 0.0; // sqrt(p_hat (1 - p_hat) / trials)
    std::size_t trials = 0;
    Receiver receiver = Receiver::if_sic;
    SearchMethod search = SearchMethod::lll_permutations;
    std::uint64_t seed = 0;

    static OutageEstimate from_counts(std::size_t hits, std::size_t trials, Receiver rx, SearchMethod sm,
                                      std::uint64_t seed)
    {
        if (trials == 0)
            throw domain_error("OutageEstimate: trials must be >= 1");
        OutageEstimate e;
        e.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
        e.std_err = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
        e.trials = trials;
        e.receiver = rx;
        e.search = sm;
        e.seed = seed;
        return e;
    }
};

// Runs f(i) for i in [0, n) on `workers` threads. Each index is processed
// exactly once, so results written by index do not depend on the worker count.
template <class F>
void parallel_for(std::size_t n, int workers, F&& f)
{
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    const auto w = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (std::size_t i = k * n / w; i < (k + 1) * n / w; ++i)
                    f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!err)
                    err = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (err)
        std::rethrow_exception(err);
}

struct ExperimentSpec {
    int n_r = 2;
    int n_t = 2;
    int t = 1; // time extension for cue-st
    double capacity_bits = 14.0;
    std::vector<double> rho2_grid; // weak-mode SNRs; empty selects the default grid
    std::vector<double> delta_c_grid;
    std::vector<double> r_grid;
    PrecoderLabel precoder = PrecoderLabel::cue;
    bool physical_cue = false; // extra CUE rotation of the physical channel, redrawn per trial
    Receiver receiver = Receiver::if_sic;
    std::size_t trials = 10'000;
    std::uint64_t seed = 1;
    SearchConfig search{};
    int workers = 1;

    static constexpr int kDefaultGridPoints = 64;

    void validate() const
    {
        if (n_t < 2 || n_r < n_t)
            throw domain_error("ExperimentSpec: need 2 <= n_t <= n_r");
        if (t < 1)
            throw domain_error("ExperimentSpec: t must be >= 1");
        if (!(capacity_bits > 0.0))
            throw domain_error("ExperimentSpec: capacity_bits must be > 0");
        if (trials < 1)
            throw domain_error("ExperimentSpec: trials must be >= 1");
        if (precoder == PrecoderLabel::badr_belfiore)
            throw domain_error("ExperimentSpec: badr-belfiore is a MAC precoder");
        if ((precoder == PrecoderLabel::alamouti || precoder == PrecoderLabel::golden) && n_t != 2)
            throw domain_error("ExperimentSpec: alamouti/golden need n_t = 2");
        const double rho_max = std::exp2(capacity_bits / n_t) - 1.0;
        for (double r : rho2_grid)
            if (!(r >= 0.0) || r > rho_max * (1.0 + 1e-12) + 1e-12)
                throw domain_error("ExperimentSpec: rho2 grid point outside [0, 2^(C/n_t) - 1]");
    }
};

// A compound-class member: n_weak modes at SNR rho_weak, the rest stronger.
struct Member {
    CompoundChannel channel;
    double rho_weak = 0.0;
    int n_weak = 1;
};

inline Member make_member(const ExperimentSpec& spec, double rho_weak, int n_weak = 1)
{
    Member m;
    m.rho_weak = rho_weak;
    m.n_weak = n_weak;
    m.channel = spec.n_t == 2 ? CompoundChannel::two_mode(spec.capacity_bits, rho_weak)
                              : CompoundChannel::two_level(spec.n_t, spec.capacity_bits, n_weak, rho_weak);
    return m;
}

// Default members: kDefaultGridPoints weak-mode SNRs evenly spaced in log2(1 + rho)
// over [0, C / n_t] (for n_t = 2 this spans rho2 in [0, 2^{C/2} - 1]), for every
// n_weak in 1..n_t-1, plus `extra_rho2` (n_weak = 1).
inline std::vector<Member> member_grid(const ExperimentSpec& spec, const std::vector<double>& extra_rho2 = {})
{
    spec.validate();
    std::vector<double> rhos = spec.rho2_grid;
    if (rhos.empty()) {
        const int g = ExperimentSpec::kDefaultGridPoints;
        const double u_max = spec.capacity_bits / spec.n_t;
        for (int i = 0; i < g; ++i)
            rhos.push_back(std::exp2(u_max * i / (g - 1)) - 1.0);
        rhos.back() = std::exp2(u_max) - 1.0;
    }
    std::vector<Member> out;
    for (int nw = 1; nw <= std::max(1, spec.n_t - 1); ++nw)
        for (double r : rhos)
            out.push_back(make_member(spec, r, nw));
    for (double r : extra_rho2)
        out.push_back(make_member(spec, r, 1));
    return out;
}

struct TrialRates {
    double if_plain = 0.0;
    double if_sic = 0.0;
    double ml = 0.0;

    double get(Receiver r) const
    {
        switch (r) {
        case Receiver::if_plain: return if_plain;
        case Receiver::if_sic: return if_sic;
        case Receiver::ml: return ml;
        }
        return 0.0;
    }
};

// Effective real channel of trial `index` for a member: diagonal representative,
// optional physical CUE rotation, then the precoder.
inline std::pair<RMatrix, int> trial_channel(const ExperimentSpec& spec, const Member& m, std::size_t index)
{
    Engine eng = make_engine({spec.seed, index});
    const Precoder p = make_precoder(spec.precoder, spec.n_t, spec.t, eng);
    CMatrix h = m.channel.matrix(spec.n_r);
    if (spec.physical_cue)
        h = h * sample_cue(spec.n_t, eng).entries;
    return {apply_precoder(h, p), p.t};
}

// Rates of the selected receivers (all three when `only` is empty) on one trial.
inline TrialRates trial_rates(const ExperimentSpec& spec, const Member& m, std::size_t index,
                              std::optional<Receiver> only = std::nullopt)
{
    const auto [h_real, t] = trial_channel(spec, m, index);
    TrialRates out;
    if (!only || *only != Receiver::ml) {
        const RMatrix k = if_gram(h_real);
        const IntegerMatrix a = search_integer_matrix(k, spec.search);
        const bool permute = spec.search.method != SearchMethod::lll && k.rows() <= SearchConfig::kMaxPermutationDim;
        if (!only || *only == Receiver::if_sic)
            out.if_sic = if_sic_rate_for(k, a, t, permute).rate_bits;
        if (!only || *only == Receiver::if_plain)
            out.if_plain = if_plain_rate_for(k, a, t).rate_bits;
    }
    if (!only || *only == Receiver::ml)
        out.ml = ml_mac_rate_real(h_real, t);
    return out;
}

// Receiver rate of every trial for one member, in trial order.
inline std::vector<double> rate_samples(const ExperimentSpec& spec, const Member& m)
{
    std::vector<double> out(spec.trials);
    parallel_for(spec.trials, spec.workers,
                 [&](std::size_t i) { out[i] = trial_rates(spec, m, i, spec.receiver).get(spec.receiver); });
    return out;
}

inline OutageEstimate estimate_outage(const ExperimentSpec& spec, const Member& m, double r)
{
    if (!(r >= 0.0))
        throw domain_error("estimate_outage: r must be >= 0");
    const auto rates = rate_samples(spec, m);
    const auto hits = static_cast<std::size_t>(std::count_if(rates.begin(), rates.end(), [r](double v) { return v < r; }));
    return OutageEstimate::from_counts(hits, spec.trials, spec.receiver, spec.search.method, spec.seed);
}

inline OutageEstimate estimate_outage(const ExperimentSpec& spec, double rho2, double r)
{
    spec.validate();
    return estimate_outage(spec, make_member(spec, rho2), r);
}

struct WorstCaseOutage {
    OutageEstimate estimate;
    double rho2 = 0.0; // worst weak-mode SNR
    int n_weak = 1;
};

// Sorted rate samples for a fixed member set; answers outage queries at any r
// without redrawing.
class RateSurface {
public:
    RateSurface(const ExperimentSpec& spec, std::vector<Member> members) : spec_(spec), members_(std::move(members))
    {
        spec_.validate();
        if (members_.empty())
            throw domain_error("RateSurface: empty member set");
        rates_.resize(members_.size());
        for (std::size_t j = 0; j < members_.size(); ++j) {
            rates_[j] = rate_samples(spec_, members_[j]);
            std::sort(rates_[j].begin(), rates_[j].end());
        }
    }

    const ExperimentSpec& spec() const { return spec_; }
    const std::vector<Member>& members() const { return members_; }

    std::size_t hits(std::size_t member, double r) const
    {
        const auto& v = rates_.at(member);
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), r) - v.begin());
    }

    OutageEstimate outage(std::size_t member, double r) const
    {
        return OutageEstimate::from_counts(hits(member, r), spec_.trials, spec_.receiver, spec_.search.method, spec_.seed);
    }

    // Ties go to the earliest member.
    WorstCaseOutage worst(double r) const
    {
        std::size_t best = 0, best_hits = hits(0, r);
        for (std::size_t j = 1; j < members_.size(); ++j) {
            const std::size_t h = hits(j, r);
            if (h > best_hits) {
                best = j;
                best_hits = h;
            }
        }
        return {outage(best, r), members_[best].rho_weak, members_[best].n_weak};
    }

private:
    ExperimentSpec spec_;
    std::vector<Member> members_;
    std::vector<std::vector<double>> rates_;
};

// rho2* of the closed-form ML worst case, added to n_t = 2 grids.
inline std::vector<double> rho2_star_points(const ExperimentSpec& spec, const std::vector<double>& rates)
{
    std::vector<double> out;
    if (spec.n_t != 2 || !spec.rho2_grid.empty())
        return out;
    for (double r : rates)
        if (r > 0.0 && r < spec.capacity_bits)
            out.push_back(rho2_star(spec.capacity_bits, r));
    return out;
}

// sup over the compound class of P(rate < r), taken over the member grid.
inline WorstCaseOutage worst_case_outage(const ExperimentSpec& spec, double r)
{
    if (!(r >= 0.0))
        throw domain_error("worst_case_outage: r must be >= 0");
    RateSurface s(spec, member_grid(spec, rho2_star_points(spec, {r})));
    return s.worst(r);
}

// Gap at which the ML worst case equals epsilon: -log2(2 eps - eps^2).
inline double ml_gap_for_epsilon(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw domain_error("epsilon must lie in (0, 1)");
    return -std::log2(2.0 * epsilon - epsilon * epsilon);
}

struct EpsilonRate {
    double rate_bits = 0.0;
    bool saturated = false; // outage exceeds epsilon even as r -> 0
    WorstCaseOutage at_rate;
};

inline constexpr int kBisectionSteps = 20;

inline EpsilonRate epsilon_outage_rate(const RateSurface& s, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw domain_error("epsilon_outage_rate: epsilon must lie in (0, 1)");
    const double c = s.spec().capacity_bits;
    const double resolution = c * std::exp2(-kBisectionSteps);
    EpsilonRate out;
    if (s.worst(c).estimate.p_hat <= epsilon) {
        out.rate_bits = c;
        out.at_rate = s.worst(c);
        return out;
    }
    if (s.worst(resolution).estimate.p_hat > epsilon) {
        out.saturated = true;
        out.at_rate = s.worst(resolution);
        return out;
    }
    double lo = 0.0, hi = c;
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (s.worst(mid).estimate.p_hat <= epsilon)
            lo = mid;
        else
            hi = mid;
    }
    out.rate_bits = lo;
    out.at_rate = s.worst(lo);
    return out;
}

// Largest rate (to C 2^-20) whose worst-case outage stays <= epsilon.
inline EpsilonRate epsilon_outage_rate(const ExperimentSpec& spec, double epsilon)
{
    const double gap = ml_gap_for_epsilon(epsilon);
    const RateSurface s(spec, member_grid(spec, rho2_star_points(spec, {spec.capacity_bits - gap})));
    return epsilon_outage_rate(s, epsilon);
}

struct Efficiency {
    double eta = 0.0;
    double rate_bits = 0.0;
    bool saturated = false;
};

inline Efficiency efficiency(const ExperimentSpec& spec, double epsilon)
{
    const EpsilonRate e = epsilon_outage_rate(spec, epsilon);
    return {std::clamp(e.rate_bits / spec.capacity_bits, 0.0, 1.0), e.rate_bits, e.saturated};
}

} // namespace iflab
