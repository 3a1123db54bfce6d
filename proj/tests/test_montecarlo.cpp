// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <atomic>

#include "iflab/bounds.hpp"
#include "iflab/montecarlo.hpp"

using namespace iflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ExperimentSpec small_spec(double c, Receiver rx, std::size_t trials)
{
    ExperimentSpec s;
    s.capacity_bits = c;
    s.receiver = rx;
    s.trials = trials;
    s.seed = 81;
    return s;
}

} // namespace

TEST_CASE("zero rate is never in outage")
{
    for (auto rx : {Receiver::if_plain, Receiver::if_sic, Receiver::ml}) {
        const auto s = small_spec(10, rx, 200);
        CHECK(estimate_outage(s, 3.0, 0.0).p_hat == 0.0);
        CHECK(worst_case_outage(small_spec(6, rx, 50), 0.0).estimate.p_hat == 0.0);
    }
    CHECK_THROWS_AS(estimate_outage(small_spec(10, Receiver::ml, 10), 3.0, -1.0), domain_error);
}

TEST_CASE("ML outage of a single member matches the closed form")
{
    const double c = 10, r = 9;
    const std::size_t n = 20000;
    for (double rho2 : {0.0, 3.0, rho2_star(c, r)}) {
        const auto est = estimate_outage(small_spec(c, Receiver::ml, n), rho2, r);
        const double p = ml_outage_given_rho2(c, r, rho2).value;
        INFO("rho2 = " << rho2 << " mc = " << est.p_hat << " exact = " << p);
        CHECK(std::abs(est.p_hat - p) <= 4 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("receivers are ordered trial by trial on common seeds")
{
    for (auto label : {PrecoderLabel::none, PrecoderLabel::cue, PrecoderLabel::cue_st, PrecoderLabel::alamouti,
                       PrecoderLabel::golden}) {
        auto s = small_spec(12, Receiver::if_sic, 1);
        s.precoder = label;
        s.t = 2;
        for (double rho2 : {0.0, 5.0, 40.0}) {
            const Member m = make_member(s, rho2);
            for (std::size_t i = 0; i < 100; ++i) {
                const TrialRates tr = trial_rates(s, m, i);
                CHECK(tr.if_plain <= tr.if_sic + 1e-9);
                CHECK(tr.if_sic <= tr.ml + 1e-9);
                CHECK(tr.ml <= s.capacity_bits + 1e-9);
                CHECK(tr.if_sic == trial_rates(s, m, i, Receiver::if_sic).if_sic);
            }
        }
    }
}

TEST_CASE("results do not depend on the worker count")
{
    auto s = small_spec(10, Receiver::if_sic, 300);
    s.physical_cue = true;
    const Member m = make_member(s, 4.0);
    const auto one = rate_samples(s, m);
    s.workers = 4;
    CHECK(rate_samples(s, m) == one);
    std::vector<std::atomic<int>> seen(1000);
    parallel_for(seen.size(), 3, [&](std::size_t i) { ++seen[i]; });
    CHECK(std::all_of(seen.begin(), seen.end(), [](const auto& v) { return v.load() == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                        if (i == 7)
                            throw domain_error("boom");
                    }),
                    domain_error);
}

TEST_CASE("member grid")
{
    auto s = small_spec(12, Receiver::ml, 1);
    const auto g = member_grid(s, {1.5});
    REQUIRE(g.size() == ExperimentSpec::kDefaultGridPoints + 1);
    CHECK(g.front().rho_weak == 0.0);
    CHECK_THAT(g[ExperimentSpec::kDefaultGridPoints - 1].rho_weak, WithinRel(std::exp2(6.0) - 1, 1e-12));
    s.n_t = 4;
    s.n_r = 4;
    CHECK(member_grid(s).size() == 3 * ExperimentSpec::kDefaultGridPoints);
    for (const auto& m : member_grid(s))
        CHECK_THAT(m.channel.mutual_information(), WithinRel(12.0, 1e-9));
    s.n_t = 1;
    CHECK_THROWS_AS(s.validate(), domain_error);
    s.n_t = 3;
    s.n_r = 2;
    CHECK_THROWS_AS(s.validate(), domain_error);
}

TEST_CASE("ML worst case over the grid tracks the closed form")
{
    const double c = 10;
    const std::size_t n = 5000;
    for (double dc : {1.0, 3.0}) {
        const auto w = worst_case_outage(small_spec(c, Receiver::ml, n), c - dc);
        const double p = thm2_ml_wc_outage(dc).value;
        const double se = std::sqrt(p * (1 - p) / n);
        INFO("dc = " << dc << " mc = " << w.estimate.p_hat << " exact = " << p);
        CHECK(w.estimate.p_hat >= p - 3 * se);
        CHECK(w.estimate.p_hat <= p + 6 * se);
    }
}

TEST_CASE("epsilon-outage rate and efficiency")
{
    const double c = 10, eps = 0.1;
    const auto s = small_spec(c, Receiver::ml, 20000);
    const EpsilonRate e = epsilon_outage_rate(s, eps);
    CHECK_FALSE(e.saturated);
    CHECK(e.at_rate.estimate.p_hat <= eps);
    CHECK(std::abs(e.rate_bits - (c - ml_gap_for_epsilon(eps))) <= 0.15);
    CHECK_THAT(ml_gap_for_epsilon(0.01), WithinAbs(5.6511, 1e-4));
    CHECK_THROWS_AS(ml_gap_for_epsilon(0.0), domain_error);

    auto sic = small_spec(8, Receiver::if_sic, 500);
    const Efficiency eta = efficiency(sic, 0.05);
    CHECK(eta.eta >= 0.0);
    CHECK(eta.eta <= 1.0);
    CHECK_THAT(eta.eta, WithinRel(eta.rate_bits / 8.0, 1e-12));
}

TEST_CASE("rate surface answers agree with direct estimates")
{
    const auto s = small_spec(8, Receiver::if_sic, 400);
    const RateSurface surf(s, {make_member(s, 0.0), make_member(s, 3.0)});
    for (double r : {2.0, 5.0, 7.5}) {
        CHECK(surf.outage(1, r).p_hat == estimate_outage(s, 3.0, r).p_hat);
        const auto w = surf.worst(r);
        CHECK(w.estimate.p_hat == std::max(surf.outage(0, r).p_hat, surf.outage(1, r).p_hat));
    }
    CHECK_THROWS_AS(RateSurface(s, {}), domain_error);
}
