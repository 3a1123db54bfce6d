// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Closed-form and semi-numerical outage bounds.
//
//   thm1_simple_upper / thm1_tight_upper   CUE-precoded IF-SIC upper bounds (N_r x 2)
//   thm2_ml_wc_outage, ml_outage_given_rho2, rho2_star
//                                          exact worst-case ML outage (N_r x 2)
//   thm3_st_lower                          space-time CUE lower bound via Jacobi integrals
//   mac_subset_outage, thm4_exact, thm5_bounds
//                                          Rayleigh MAC conditioned on the sum capacity
//
// Rates and capacities are in bits per complex channel use. Every returned
// probability is clamped to [0, 1].

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "iflab/ensembles.hpp"
#include "iflab/errors.hpp"
#include "iflab/special_functions.hpp"

namespace iflab {

enum class BoundMethod { closed_form, quadrature, monte_carlo };

inline std::string_view to_string(BoundMethod m)
{
    switch (m) {
    case BoundMethod::closed_form: return "closed-form";
    case BoundMethod::quadrature: return "quadrature";
    case BoundMethod::monte_carlo: return "monte-carlo";
    }
    return "?";
}

struct BoundValue {
    double value = 0.0;
    BoundMethod method = BoundMethod::closed_form;
    double abs_error = 0.0;
};

inline double clamp_probability(double p)
{
    if (std::isnan(p))
        throw domain_error("probability evaluated to NaN");
    return std::clamp(p, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Upper bounds for CUE-precoded IF-SIC

// min(81 pi^2 2^-dC, 1), valid for dC > 1.
inline BoundValue thm1_simple_upper(double delta_c)
{
    if (!(delta_c > 1.0))
        throw domain_error("thm1_simple_upper: requires delta_c > 1");
    return {clamp_probability(81.0 * std::numbers::pi * std::numbers::pi * std::exp2(-delta_c)),
            BoundMethod::closed_form, 0.0};
}

// Thrown when the primitive-vector enumeration of thm1_tight_upper would
// exceed its cap; `partial` holds the bound over the vectors seen so far
// (which is not a valid upper bound).
struct partial_bound_error : resource_error {
    BoundValue partial;
    partial_bound_error(const char* what, BoundValue p) : resource_error(what), partial(p) {}
};

namespace detail {

// Number of primitive vectors of Z^n (both signs) per squared norm m < bound.
inline std::map<std::int64_t, std::uint64_t> primitive_norm_counts(int n, std::int64_t bound_exclusive,
                                                                   std::uint64_t cap, bool& capped)
{
    std::map<std::int64_t, std::uint64_t> counts;
    std::vector<std::int64_t> a(static_cast<std::size_t>(n), 0);
    std::uint64_t seen = 0;
    capped = false;
    auto rec = [&](auto&& self, int i, std::int64_t norm, std::int64_t g) -> void {
        if (capped)
            return;
        if (i == n) {
            if (norm > 0 && g == 1) {
                ++counts[norm];
                if (++seen >= cap)
                    capped = true;
            }
            return;
        }
        const auto lim = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(bound_exclusive - 1 - norm))));
        for (std::int64_t v = -lim; v <= lim; ++v) {
            const std::int64_t nn = norm + v * v;
            if (nn >= bound_exclusive)
                continue;
            self(self, i + 1, nn, std::gcd(g, v < 0 ? -v : v));
        }
    };
    if (bound_exclusive > 1)
        rec(rec, 0, 0, 0);
    return counts;
}

} // namespace detail

// Tighter upper bound
//   max_{d_max} sum_{a in B(G, d_max)} 2 pi^2 2^{-3(C+dC)/4} / (pi^2 (|a|^3 / 2^C) sqrt(d_max)),
// G = 2^{-(C+dC)/2}, B = primitive a in Z^n with 0 < |a| < sqrt(G d_max), both signs counted.
// d_max ranges over [2^{C/2}, 2^C]: a d_grid-point log grid plus every point where
// a new norm shell enters B (the sum only jumps there and decays in between).
inline BoundValue thm1_tight_upper(double c, double delta_c, int n_dim = 4, int d_grid = 64,
                                   std::uint64_t enumeration_cap = 10'000'000)
{
    if (!(delta_c > 0.0))
        throw domain_error("thm1_tight_upper: requires delta_c > 0");
    if (n_dim < 1 || d_grid < 2)
        throw domain_error("thm1_tight_upper: need n_dim >= 1 and d_grid >= 2");
    const double gamma = std::exp2(-0.5 * (c + delta_c));
    const double d_lo = std::exp2(c / 2.0), d_hi = std::exp2(c);
    const double coef = 2.0 * std::exp2(-0.75 * (c + delta_c)) * std::exp2(c);
    const double max_radius_sq = gamma * d_hi;
    const auto bound_excl = static_cast<std::int64_t>(std::floor(max_radius_sq)) + 1;

    bool capped = false;
    const auto counts = detail::primitive_norm_counts(n_dim, bound_excl, enumeration_cap, capped);

    // value at d_max counting shells with m < G d_max (or <= when `inclusive`)
    auto value_at = [&](double d, bool inclusive) {
        double s = 0.0;
        const double lim = gamma * d;
        for (const auto& [m, cnt] : counts) {
            const auto md = static_cast<double>(m);
            if (md < lim || (inclusive && md <= lim * (1.0 + 1e-12)))
                s += static_cast<double>(cnt) * std::pow(md, -1.5);
            else
                break;
        }
        return coef * s / std::sqrt(d);
    };

    double best = 0.0;
    for (int i = 0; i < d_grid; ++i) {
        const double d = d_lo * std::pow(d_hi / d_lo, static_cast<double>(i) / (d_grid - 1));
        best = std::max(best, value_at(d, false));
    }
    for (const auto& [m, cnt] : counts) {
        const double d = static_cast<double>(m) / gamma; // limit from above of the shell entry point
        if (d >= d_lo && d <= d_hi)
            best = std::max(best, value_at(d, true));
    }
    if (capped)
        throw partial_bound_error("thm1_tight_upper: enumeration cap exceeded",
                                  {clamp_probability(best), BoundMethod::closed_form, 0.0});
    return {clamp_probability(best), BoundMethod::closed_form, 0.0};
}

// ---------------------------------------------------------------------------
// Exact worst-case ML outage for N_r x 2 (N_r >= 2) with CUE precoding

// 1 - sqrt(1 - 2^-dC)
inline BoundValue thm2_ml_wc_outage(double delta_c)
{
    if (!(delta_c >= 0.0))
        throw domain_error("thm2_ml_wc_outage: requires delta_c >= 0");
    return {clamp_probability(1.0 - std::sqrt(-std::expm1(-delta_c * std::numbers::ln2))),
            BoundMethod::closed_form, 0.0};
}

// Outage of the equal-rate ML receiver for the member with weak mode rho2:
//   2 * max(2^{R/2} - 1 - rho2, 0) / (2^C / (1 + rho2) - 1 - rho2).
inline BoundValue ml_outage_given_rho2(double c, double r, double rho2)
{
    const double rho2_max = std::exp2(c / 2.0) - 1.0;
    if (!(rho2 >= 0.0) || rho2 > rho2_max * (1.0 + 1e-12) + 1e-12)
        throw domain_error("ml_outage_given_rho2: rho2 outside [0, 2^(C/2) - 1]");
    if (!(r >= 0.0))
        throw domain_error("ml_outage_given_rho2: r must be >= 0");
    const double num = std::exp2(r / 2.0) - 1.0 - rho2;
    if (num <= 0.0)
        return {0.0, BoundMethod::closed_form, 0.0};
    const double den = std::exp2(c) / (1.0 + rho2) - 1.0 - rho2;
    if (den <= 0.0)
        return {1.0, BoundMethod::closed_form, 0.0};
    return {clamp_probability(2.0 * num / den), BoundMethod::closed_form, 0.0};
}

// Maximiser of ml_outage_given_rho2 over rho2 (requires r < c).
inline double rho2_star(double c, double r)
{
    if (!(r < c))
        throw domain_error("rho2_star: requires r < c");
    const double v = std::exp2(-r / 2.0 - 1.0) *
                     (std::exp2(c + 1.0) - std::exp2(r / 2.0 + 1.0) - 2.0 * std::sqrt(std::exp2(2.0 * c) - std::exp2(c + r)));
    return std::clamp(v, 0.0, std::exp2(c / 2.0) - 1.0);
}

// ---------------------------------------------------------------------------
// Space-time CUE lower bound

struct Thm3Config {
    int gl_points = 128;
    int rho2_grid = 256;
    std::size_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 0x7e3a11;
    // quadrature estimates whose coarse/fine discrepancy exceeds this fall back to Monte Carlo
    double quadrature_tolerance = 1e-6;
};

struct Thm3Detail {
    BoundValue bound;
    double rho2 = 0.0; // maximising weak-mode SNR
    int k = 0;         // maximising column-subset size
};

namespace detail {

// P( prod_{i<=n} (base + l_i * gap) < tau ) for eigenvalues of J(T, T, n), n in {1, 2},
// by tensor Gauss-Legendre with the region boundary solved in closed form.
inline double jacobi_product_cdf_quadrature(int t, int n, double base, double gap, double tau,
                                            const GaussLegendre& gl)
{
    const JacobiSpec spec{t, t, n};
    const double log_norm = -log_selberg_kappa(spec);
    const int e = t - n;
    auto weight1 = [&](double l) { return std::pow(l, e) * std::pow(1.0 - l, e); };

    if (gap <= 0.0)
        return std::pow(base, n) < tau ? 1.0 : 0.0;
    // upper limit for one eigenvalue given the product budget `budget`
    auto limit = [&](double budget) { return std::clamp((budget - base) / gap, 0.0, 1.0); };

    if (n == 1) {
        const double x = limit(tau);
        return std::exp(log_norm) * gl.integrate(weight1, 0.0, x);
    }
    // n == 2: symmetric weight over the unit square
    auto inner = [&](double l1) {
        const double x = limit(tau / (base + l1 * gap));
        if (x <= 0.0)
            return 0.0;
        return weight1(l1) * gl.integrate([&](double l2) { return weight1(l2) * (l1 - l2) * (l1 - l2); }, 0.0, x);
    };
    // kinks of the inner limit: where it reaches 1 and where it reaches 0
    std::vector<double> cuts{0.0, 1.0};
    for (double edge : {base + gap, base}) {
        const double l1 = (tau / edge - base) / gap;
        if (l1 > 0.0 && l1 < 1.0)
            cuts.push_back(l1);
    }
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        s += gl.integrate(inner, cuts[i], cuts[i + 1]);
    return std::exp(log_norm) * s;
}

struct Thm3Evaluator {
    double c, r;
    int t;
    Thm3Config cfg;
    GaussLegendre gl_fine, gl_coarse;
    // cached Jacobi samples per dimension n >= 3 (common random numbers across rho2)
    std::map<int, std::vector<std::vector<double>>> samples;

    Thm3Evaluator(double c_, double r_, int t_, const Thm3Config& cfg_)
        : c(c_), r(r_), t(t_), cfg(cfg_), gl_fine(cfg_.gl_points), gl_coarse(std::max(2, cfg_.gl_points / 2))
    {
    }

    const std::vector<std::vector<double>>& jacobi_samples(int n)
    {
        auto it = samples.find(n);
        if (it != samples.end())
            return it->second;
        std::vector<std::vector<double>> v;
        v.reserve(cfg.mc_samples);
        Engine eng = make_engine({cfg.mc_seed, static_cast<std::uint64_t>(n)});
        for (std::size_t i = 0; i < cfg.mc_samples; ++i)
            v.push_back(sample_jacobi({t, t, n}, eng));
        return samples.emplace(n, std::move(v)).first->second;
    }

    // Outage of the first k-column subset for the member (rho1, rho2).
    BoundValue term(int k, double rho1, double rho2)
    {
        const double base = 1.0 + rho2, gap = rho1 - rho2;
        int n;
        double log2_tau;
        if (k <= t) {
            n = k;
            log2_tau = r * k / 2.0;
        } else {
            // k - T eigenvalues sit at 1 and k - T at 0; each such pair contributes
            // (1 + rho1)(1 + rho2) = 2^C to the determinant
            n = 2 * t - k;
            log2_tau = r * k / 2.0 - c * (k - t);
        }
        const double tau = std::exp2(log2_tau);
        // for T = 1 the two single-column events are disjoint and equiprobable
        const double multiplicity = (t == 1 && k == 1 && r <= c) ? 2.0 : 1.0;
        if (n <= 2) {
            const double fine = jacobi_product_cdf_quadrature(t, n, base, gap, tau, gl_fine);
            const double coarse = jacobi_product_cdf_quadrature(t, n, base, gap, tau, gl_coarse);
            const double err = std::abs(fine - coarse) + 64.0 * std::numeric_limits<double>::epsilon();
            if (err <= cfg.quadrature_tolerance)
                return {clamp_probability(multiplicity * fine), BoundMethod::quadrature, multiplicity * err};
        }
        const auto& draws = jacobi_samples(n);
        std::size_t hits = 0;
        for (const auto& lam : draws) {
            double prod = 1.0;
            for (double l : lam)
                prod *= base + l * gap;
            if (prod < tau)
                ++hits;
        }
        const double p = static_cast<double>(hits) / static_cast<double>(draws.size());
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(draws.size()));
        return {clamp_probability(multiplicity * p), BoundMethod::monte_carlo, multiplicity * se};
    }

    // max over k in 1..2T-1 at the member whose weak mode carries u = log2(1 + rho2) bits
    Thm3Detail at(double u)
    {
        const double rho2 = std::exp2(u) - 1.0;
        const double rho1 = std::max(std::exp2(c) / (1.0 + rho2) - 1.0, rho2);
        Thm3Detail best;
        best.rho2 = rho2;
        best.bound = {0.0, BoundMethod::closed_form, 0.0};
        for (int k = 1; k <= 2 * t - 1; ++k) {
            const BoundValue b = term(k, rho1, rho2);
            if (b.value > best.bound.value || best.k == 0) {
                best.bound = b;
                best.k = k;
            }
        }
        return best;
    }
};

} // namespace detail

// One subset term of the space-time bound: the first k columns of the
// time-extended member (rho1, rho2) cannot support the rate r. For t = 1, k = 1
// both single columns are covered (their outage events are disjoint).
struct StRegionSpec {
    int t = 1;
    int k = 1;
    double r_bits = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;

    void validate() const
    {
        if (t < 1 || k < 1 || k > 2 * t)
            throw domain_error("StRegionSpec: need t >= 1 and 1 <= k <= 2t");
        if (!(rho2 >= 0.0) || !(rho2 <= rho1))
            throw domain_error("StRegionSpec: need 0 <= rho2 <= rho1");
        if (!(r_bits >= 0.0))
            throw domain_error("StRegionSpec: r_bits must be >= 0");
    }
};

inline BoundValue st_subset_outage(const StRegionSpec& s, const Thm3Config& cfg = {})
{
    s.validate();
    const double c = std::log2(1.0 + s.rho1) + std::log2(1.0 + s.rho2);
    if (s.k == 2 * s.t)
        return {s.r_bits > c ? 1.0 : 0.0, BoundMethod::closed_form, 0.0};
    detail::Thm3Evaluator ev(c, s.r_bits, s.t, cfg);
    return ev.term(s.k, s.rho1, s.rho2);
}

// Lower bound on the worst-case outage of CUE space-time precoding over T channel uses:
// max over rho2 in [0, 2^{C/2} - 1] and k in 1..2T-1 of the outage of the first k-column
// subset, which is a Jacobi-ensemble integral. The k = 2T subset is in outage iff R > C.
inline Thm3Detail thm3_st_lower_detail(double c, double r, int t, const Thm3Config& cfg = {})
{
    if (t < 1)
        throw domain_error("thm3_st_lower: t must be >= 1");
    if (!(r >= 0.0) || !(c >= 0.0))
        throw domain_error("thm3_st_lower: need r >= 0 and c >= 0");
    if (cfg.rho2_grid < 3)
        throw domain_error("thm3_st_lower: rho2 grid needs at least 3 points");
    if (r > c)
        return {{1.0, BoundMethod::closed_form, 0.0}, 0.0, 2 * t};
    if (r == 0.0 || t * 2 - 1 < 1)
        return {{0.0, BoundMethod::closed_form, 0.0}, 0.0, 1};

    detail::Thm3Evaluator ev(c, r, t, cfg);
    const double u_max = c / 2.0;
    const int g = cfg.rho2_grid;
    std::vector<Thm3Detail> vals;
    vals.reserve(static_cast<std::size_t>(g));
    std::size_t arg = 0;
    for (int i = 0; i < g; ++i) {
        vals.push_back(ev.at(u_max * i / (g - 1)));
        if (vals.back().bound.value > vals[arg].bound.value)
            arg = vals.size() - 1;
    }
    // golden-section refinement inside the neighbouring grid cells
    double lo = u_max * static_cast<double>(arg > 0 ? arg - 1 : 0) / (g - 1);
    double hi = u_max * static_cast<double>(std::min<std::size_t>(arg + 1, static_cast<std::size_t>(g - 1))) / (g - 1);
    Thm3Detail best = vals[arg];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    Thm3Detail f1 = ev.at(x1), f2 = ev.at(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * std::max(1.0, u_max); ++it) {
        if (f1.bound.value >= f2.bound.value) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = ev.at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = ev.at(x2);
        }
    }
    for (const auto* cand : {&f1, &f2})
        if (cand->bound.value > best.bound.value)
            best = *cand;
    // account for the residual optimisation error over the final bracket
    const double spread = std::abs(f1.bound.value - f2.bound.value);
    best.bound.abs_error += spread;
    return best;
}

inline BoundValue thm3_st_lower(double c, double r, int t, const Thm3Config& cfg = {})
{
    return thm3_st_lower_detail(c, r, t, cfg).bound;
}

// ---------------------------------------------------------------------------
// Rayleigh MAC conditioned on the sum capacity

// P(C(S) < R | C) for |S| = k of n_t users: I_x(k, n_t - k), x = (2^{R k / n_t} - 1) / (2^C - 1).
// The full set (k = n_t) is in outage iff R > C.
inline BoundValue mac_subset_outage(int k, int n_t, double r, double c)
{
    if (n_t < 1 || k < 1 || k > n_t)
        throw domain_error("mac_subset_outage: need 1 <= k <= n_t");
    if (!(r >= 0.0) || !(c >= 0.0))
        throw domain_error("mac_subset_outage: need r >= 0 and c >= 0");
    if (k == n_t)
        return {r > c ? 1.0 : 0.0, BoundMethod::closed_form, 0.0};
    const double den = std::expm1(c * std::numbers::ln2);
    const double num = std::expm1(r * k / n_t * std::numbers::ln2);
    if (num <= 0.0)
        return {0.0, BoundMethod::closed_form, 0.0};
    if (den <= 0.0)
        return {1.0, BoundMethod::closed_form, 0.0};
    const double x = std::clamp(num / den, 0.0, 1.0);
    return {clamp_probability(regularized_incomplete_beta(x, k, n_t - k)), BoundMethod::closed_form, 0.0};
}

// Two-user law: P(C_sym < R | C) = 2 (2^{R/2} - 1) / (2^C - 1).
inline BoundValue thm4_exact(double c, double r)
{
    if (!(r >= 0.0) || !(c >= 0.0))
        throw domain_error("thm4_exact: need r >= 0 and c >= 0");
    if (r > c)
        return {1.0, BoundMethod::closed_form, 0.0};
    const double num = std::expm1(r / 2.0 * std::numbers::ln2);
    const double den = std::expm1(c * std::numbers::ln2);
    if (num <= 0.0)
        return {0.0, BoundMethod::closed_form, 0.0};
    return {clamp_probability(2.0 * num / den), BoundMethod::closed_form, 0.0};
}

struct BoundPair {
    BoundValue lower;
    BoundValue upper;
};

// max_k P_out(k) <= P(C_sym < R | C) <= sum_k binom(n_t, k) P_out(k)
inline BoundPair thm5_bounds(int n_t, double r, double c)
{
    if (n_t < 2)
        throw domain_error("thm5_bounds: n_t must be >= 2");
    double lo = 0.0, up = 0.0, binom = 1.0;
    for (int k = 1; k <= n_t; ++k) {
        binom = binom * (n_t - k + 1) / k;
        const double p = mac_subset_outage(k, n_t, r, c).value;
        lo = std::max(lo, p);
        up += binom * p;
    }
    return {{clamp_probability(lo), BoundMethod::closed_form, 0.0},
            {clamp_probability(up), BoundMethod::closed_form, 0.0}};
}

} // namespace iflab
