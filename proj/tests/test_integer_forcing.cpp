// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "iflab/ensembles.hpp"
#include "iflab/integer_forcing.hpp"

using namespace iflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CMatrix random_channel(int r, int c, std::uint64_t id, double snr = 30.0)
{
    Engine eng = make_engine({41, id});
    return complex_gaussian(r, c, eng) * std::sqrt(snr);
}

// Box enumeration oracle: every integer vector with a^T K a <= radius, the
// box half-widths taken from sqrt(radius (K^-1)_ii). Independent of the
// library's sphere enumeration.
std::vector<Eigen::VectorXd> box_vectors(const RMatrix& k, double radius)
{
    const RMatrix kinv = k.inverse();
    const auto n = static_cast<int>(k.rows());
    std::vector<int> lim(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        lim[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(std::sqrt(radius * kinv(i, i)) + 1e-9));
    std::vector<Eigen::VectorXd> out;
    Eigen::VectorXd a(n);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            if (a.cwiseAbs().sum() > 0 && a.dot(k * a) <= radius * (1 + 1e-9))
                out.push_back(a);
            return;
        }
        for (int v = -lim[static_cast<std::size_t>(i)]; v <= lim[static_cast<std::size_t>(i)]; ++v) {
            a(i) = v;
            rec(i + 1);
        }
    };
    rec(0);
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return x.dot(k * x) < y.dot(k * y); });
    return out;
}

// Best IF-SIC rate from the greedy shortest independent set, over all SIC orders.
double oracle_sic_rate(const RMatrix& k, double radius)
{
    const auto n = k.rows();
    const auto vecs = box_vectors(k, radius);
    RMatrix a(0, n);
    for (const auto& v : vecs) {
        RMatrix trial(a.rows() + 1, n);
        trial << a, v.transpose();
        Eigen::FullPivLU<RMatrix> lu(trial);
        lu.setThreshold(1e-9);
        if (lu.rank() == trial.rows())
            a = trial;
        if (a.rows() == n)
            break;
    }
    REQUIRE(a.rows() == n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        RMatrix p(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            p.row(i) = a.row(perm[static_cast<std::size_t>(i)]);
        const RMatrix m = p * k * p.transpose();
        Eigen::LLT<RMatrix> llt(m);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            worst = std::max(worst, std::pow(llt.matrixL()(i, i), 2));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::max(0.0, 0.5 * static_cast<double>(n) * -std::log2(best));
}

// Equal-rate ML over column subsets with determinants from Eigen's LU.
double oracle_ml(const CMatrix& h)
{
    const auto n = static_cast<int>(h.cols());
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> cols;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i))
                cols.push_back(i);
        CMatrix hs(h.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            hs.col(static_cast<Eigen::Index>(j)) = h.col(cols[j]);
        const cplx det = (CMatrix::Identity(h.rows(), h.rows()) + hs * hs.adjoint()).determinant();
        best = std::min(best, static_cast<double>(n) / cols.size() * std::log2(det.real()));
    }
    return std::max(best, 0.0);
}

} // namespace

TEST_CASE("if_gram")
{
    CHECK(if_gram(RMatrix::Zero(4, 4)) == RMatrix::Identity(4, 4));
    CHECK((if_gram(RMatrix::Identity(2, 2)) - 0.5 * RMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const RMatrix h = complex_to_real(random_channel(3, 2, s));
        const RMatrix k = if_gram(h);
        const RMatrix back = k * (RMatrix::Identity(4, 4) + h.transpose() * h);
        CHECK((back - RMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
        Eigen::SelfAdjointEigenSolver<RMatrix> es(k);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("search returns full-rank matrices; identity is optimal for K = I")
{
    const RMatrix k = RMatrix::Identity(4, 4);
    for (auto m : {SearchMethod::lll, SearchMethod::lll_permutations, SearchMethod::exhaustive}) {
        SearchConfig cfg;
        cfg.method = m;
        const IntegerMatrix a = search_integer_matrix(k, cfg);
        CHECK(a.cast<double>().determinant() != 0.0);
        CHECK_THAT(if_sic_rate_for(k, a, 1, true).rate_bits, WithinAbs(0.0, 1e-12));
    }
    for (std::uint64_t s = 0; s < 50; ++s) {
        const RMatrix k2 = if_gram(complex_to_real(random_channel(2 + static_cast<int>(s % 3), 2 + static_cast<int>(s % 2), s)));
        const IntegerMatrix a = search_integer_matrix(k2, {});
        CHECK(std::abs(a.cast<double>().determinant()) > 0.5);
    }
}

TEST_CASE("search config guards")
{
    SearchConfig cfg;
    cfg.method = SearchMethod::exhaustive;
    CHECK_THROWS_AS(search_integer_matrix(RMatrix::Identity(6, 6), cfg), domain_error);
    SearchConfig bad;
    bad.lll_delta = 0.2;
    CHECK_THROWS_AS(search_integer_matrix(RMatrix::Identity(2, 2), bad), domain_error);
    CHECK(parse_search_method("exhaustive") == SearchMethod::exhaustive);
    CHECK_THROWS_AS(parse_search_method("greedy"), domain_error);
}

TEST_CASE("LLL + permutations matches the box-enumeration oracle on 2x2 channels")
{
    for (std::uint64_t s = 0; s < 100; ++s) {
        const CMatrix h = random_channel(2, 2, 1000 + s, std::exp2(2.0 + (s % 10)));
        const RMatrix hr = complex_to_real(h);
        const RMatrix k = if_gram(hr);
        const auto lll = if_sic_rate(hr, 1);
        // radius: the largest row of the LLL basis, as the library's exhaustive mode uses
        double radius = 0.0;
        const IntegerMatrix a = search_integer_matrix(k, {SearchMethod::lll, 0.99, 0.0});
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            radius = std::max(radius, quadratic_norm(k, a.row(i).transpose()));
        CHECK_THAT(lll.rate_bits, WithinAbs(oracle_sic_rate(k, radius), 1e-9));
        SearchConfig ex;
        ex.method = SearchMethod::exhaustive;
        CHECK_THAT(if_sic_rate(hr, 1, ex).rate_bits, WithinAbs(lll.rate_bits, 1e-9));
    }
}

TEST_CASE("IF-SIC on scaled identity channels")
{
    CHECK(if_sic_rate(RMatrix::Zero(4, 4), 1).rate_bits == 0.0);
    CHECK(if_plain_rate(RMatrix::Zero(4, 4), 1).rate_bits == 0.0);
    const CMatrix h = std::sqrt(3.0) * CMatrix::Identity(2, 2);
    const auto r = if_sic_rate(complex_to_real(h), 1);
    CHECK_THAT(r.rate_bits, WithinAbs(4.0, 1e-12));
    for (Eigen::Index i = 0; i < r.ell_diag.size(); ++i)
        CHECK_THAT(r.ell_diag(i) * r.ell_diag(i), WithinAbs(0.25, 1e-12));
    CHECK_THAT(if_plain_rate(complex_to_real(h), 1).rate_bits, WithinAbs(4.0, 1e-12));
}

TEST_CASE("dominance: plain <= SIC <= ML <= WI")
{
    for (std::uint64_t s = 0; s < 300; ++s) {
        const int nr = 2 + static_cast<int>(s % 2), nt = 2;
        const CMatrix h = random_channel(nr, nt, 2000 + s, std::exp2(static_cast<double>(s % 12)));
        const RMatrix hr = complex_to_real(h);
        const double plain = if_plain_rate(hr, 1).rate_bits;
        const double sic = if_sic_rate(hr, 1).rate_bits;
        const double ml = ml_mac_rate(h);
        CHECK(plain <= sic + 1e-9);
        CHECK(sic <= ml + 1e-9);
        CHECK(ml <= wi_capacity(h) + 1e-9);
        CHECK_THAT(ml_mac_rate_real(hr), WithinAbs(ml, 1e-9));
    }
}

TEST_CASE("plain rate never exceeds SIC for a fixed A")
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const RMatrix k = if_gram(complex_to_real(random_channel(2, 2, 3000 + s)));
        Engine eng = make_engine({42, s});
        std::uniform_int_distribution<int> d(-3, 3);
        IntegerMatrix a(4, 4);
        do {
            for (Eigen::Index i = 0; i < 16; ++i)
                a(i) = d(eng);
        } while (std::abs(a.cast<double>().determinant()) < 0.5);
        CHECK(if_plain_rate_for(k, a, 1).rate_bits <= if_sic_rate_for(k, a, 1, false).rate_bits + 1e-12);
    }
}

TEST_CASE("exhaustive optimum is invariant under unimodular mixing of the channel lattice")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        const RMatrix hr = complex_to_real(random_channel(2, 2, 4000 + s));
        const RMatrix k = if_gram(hr);
        IntegerMatrix u = IntegerMatrix::Identity(4, 4);
        u(0, 1) = 2;
        u(3, 2) = -1;
        u(1, 3) = 1;
        // A -> A U keeps the set of achievable rows: K' = U K U^T is the same lattice
        const RMatrix uk = u.cast<double>() * k * u.cast<double>().transpose();
        SearchConfig ex;
        ex.method = SearchMethod::exhaustive;
        const double r1 = if_sic_rate_for(k, search_integer_matrix(k, ex), 1, true).rate_bits;
        const double r2 = if_sic_rate_for(uk, search_integer_matrix(uk, ex), 1, true).rate_bits;
        CHECK_THAT(r2, WithinAbs(r1, 1e-9));
    }
}

TEST_CASE("receiver rotation and SNR scaling")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        const CMatrix h = random_channel(2, 2, 5000 + s);
        const UnitaryMatrix w = sample_cue(2, RngSeed{43, s});
        const double base = if_sic_rate(complex_to_real(h), 1).rate_bits;
        CHECK_THAT(if_sic_rate(complex_to_real(w.entries * h), 1).rate_bits, WithinAbs(base, 1e-8));
        const RMatrix k = if_gram(complex_to_real(h));
        const IntegerMatrix a = search_integer_matrix(k, {});
        const RMatrix k2 = if_gram(complex_to_real(1.7 * h));
        CHECK(if_sic_rate_for(k2, a, 1, false).rate_bits >= if_sic_rate_for(k, a, 1, false).rate_bits - 1e-12);
    }
}

TEST_CASE("time extension divides the per-slot rate")
{
    const CMatrix h = random_channel(2, 2, 77);
    const double r1 = if_sic_rate(complex_to_real(h), 1).rate_bits;
    const double r2 = if_sic_rate(complex_to_real(time_extend(h, 2)), 2).rate_bits;
    CHECK(r2 <= r1 + 1e-9);
    CHECK(r2 > 0.0);
}

TEST_CASE("ML MAC rate")
{
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    CHECK(ml_mac_rate(d) == 0.0);
    const CMatrix e = std::sqrt(3.0) * CMatrix::Identity(2, 2);
    CHECK_THAT(ml_mac_rate(e), WithinAbs(4.0, 1e-12));
    for (std::uint64_t s = 0; s < 50; ++s) {
        const int nt = 2 + static_cast<int>(s % 3);
        const CMatrix h = random_channel(2, nt, 6000 + s);
        CHECK_THAT(ml_mac_rate(h), WithinAbs(oracle_ml(h), 1e-9));
    }
    const CMatrix h4 = random_channel(2, 4, 7000);
    CHECK_THAT(ml_mac_rate(h4), WithinAbs(oracle_ml(h4), 1e-9));
    CHECK_THROWS_AS(ml_mac_rate(h4, 3), shape_error);
}
