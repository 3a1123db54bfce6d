// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------
//
// Achievable rates of integer-forcing (IF) and IF with successive
// interference cancellation (IF-SIC) over the real representation of a
// complex channel, plus the joint-ML equal-rate MAC benchmark.
//
// For an integer matrix A and K = (I + H^T H)^{-1}, IF-SIC factors
// A K A^T = L L^T and supports (1/T) * n * (1/2) * min_m log2(1 / l_mm^2)
// bits per complex channel use, n being the number of real streams.
// Plain IF replaces l_mm^2 by a_m^T K a_m.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "iflab/errors.hpp"
#include "iflab/matrix_core.hpp"

namespace iflab {

using IntegerMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntegerVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

enum class SearchMethod { lll, lll_permutations, exhaustive };

inline std::string_view to_string(SearchMethod m)
{
    switch (m) {
    case SearchMethod::lll: return "lll";
    case SearchMethod::lll_permutations: return "lll+permutations";
    case SearchMethod::exhaustive: return "exhaustive";
    }
    return "?";
}

inline SearchMethod parse_search_method(std::string_view s)
{
    if (s == "lll")
        return SearchMethod::lll;
    if (s == "lll+permutations")
        return SearchMethod::lll_permutations;
    if (s == "exhaustive")
        return SearchMethod::exhaustive;
    throw domain_error("unknown search method: " + std::string(s));
}

struct SearchConfig {
    SearchMethod method = SearchMethod::lll_permutations;
    double lll_delta = 0.99;
    // <= 0 selects the largest quadratic norm among the LLL basis rows.
    double enum_radius_sq = 0.0;

    // Full permutation search over SIC orderings is done up to this dimension.
    static constexpr int kMaxPermutationDim = 4;
    static constexpr int kMaxExhaustiveDim = 4;
    static constexpr long kLllIterationCap = 100000;

    void validate(int dim) const
    {
        if (!(lll_delta > 0.25 && lll_delta <= 1.0))
            throw domain_error("SearchConfig: lll_delta must lie in (0.25, 1]");
        if (method == SearchMethod::exhaustive && dim > kMaxExhaustiveDim)
            throw domain_error("SearchConfig: exhaustive search limited to dimension <= 4");
    }
};

struct IfRateResult {
    double rate_bits = 0.0;
    IntegerMatrix a_matrix;
    RVector ell_diag;
    SearchMethod method = SearchMethod::lll_permutations;
};

// K = (I + H^T H)^{-1}.
inline RMatrix if_gram(const RMatrix& h_real)
{
    if (!h_real.allFinite())
        throw domain_error("if_gram: non-finite channel entries");
    const Eigen::Index n = h_real.cols();
    RMatrix m = RMatrix::Identity(n, n) + h_real.transpose() * h_real;
    Eigen::LLT<RMatrix> llt(m);
    RMatrix k = llt.solve(RMatrix::Identity(n, n));
    return 0.5 * (k + k.transpose());
}

inline double quadratic_norm(const RMatrix& k, const IntegerVector& a)
{
    const RVector v = a.cast<double>();
    return v.dot(k * v);
}

namespace detail {

// Largest Cholesky diagonal of m (n <= 16). Returns +inf if m is not PD.
inline double max_cholesky_diag(const RMatrix& m, RVector* diag = nullptr)
{
    const Eigen::Index n = m.rows();
    double l[16][16];
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double p = m(j, j);
        for (Eigen::Index k = 0; k < j; ++k)
            p -= l[j][k] * l[j][k];
        if (!(p > 0.0))
            return std::numeric_limits<double>::infinity();
        const double d = std::sqrt(p);
        l[j][j] = d;
        if (diag)
            (*diag)(j) = d;
        worst = std::max(worst, d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                s -= l[i][k] * l[j][k];
            l[i][j] = s / d;
        }
    }
    return worst;
}

inline double rate_from_max_ell_sq(double max_ell_sq, Eigen::Index n, int t)
{
    // (1/T) * n * (1/2) * log2(1 / max_ell^2), floored at zero
    const double r = 0.5 * static_cast<double>(n) / t * -std::log2(max_ell_sq);
    return std::max(r, 0.0);
}

} // namespace detail

// LLL reduction of the lattice spanned by the rows of `basis`.
// Returns the unimodular U such that U * basis is LLL-reduced with parameter delta.
inline IntegerMatrix lll_reduce(const RMatrix& basis, double delta = 0.99)
{
    const Eigen::Index n = basis.rows();
    RMatrix b = basis;
    IntegerMatrix u = IntegerMatrix::Identity(n, n);
    RMatrix mu = RMatrix::Zero(n, n);
    RVector bstar_sq(n);

    auto gram_schmidt = [&]() {
        RMatrix bstar = b;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                mu(i, j) = b.row(i).dot(bstar.row(j)) / bstar_sq(j);
                bstar.row(i) -= mu(i, j) * bstar.row(j);
            }
            bstar_sq(i) = bstar.row(i).squaredNorm();
        }
    };
    gram_schmidt();

    Eigen::Index k = 1;
    long iterations = 0;
    while (k < n) {
        if (++iterations > SearchConfig::kLllIterationCap)
            throw search_failure("lll_reduce: iteration cap exceeded");
        for (Eigen::Index j = k - 1; j >= 0; --j) {
            const double q = std::round(mu(k, j));
            if (q != 0.0) {
                b.row(k) -= q * b.row(j);
                u.row(k) -= static_cast<std::int64_t>(q) * u.row(j);
                for (Eigen::Index l = 0; l <= j; ++l)
                    mu(k, l) -= q * (l == j ? 1.0 : mu(j, l));
            }
        }
        if (bstar_sq(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq(k - 1)) {
            ++k;
        } else {
            b.row(k).swap(b.row(k - 1));
            u.row(k).swap(u.row(k - 1));
            gram_schmidt();
            k = std::max<Eigen::Index>(k - 1, 1);
        }
    }
    return u;
}

// All nonzero integer vectors a with a^T K a <= radius_sq, one of each +/- pair
// (first nonzero coordinate positive), sorted by ascending quadratic norm.
// Depth-first sphere enumeration on the Cholesky factor of K.
inline std::vector<IntegerVector> enumerate_short_vectors(const RMatrix& k, double radius_sq,
                                                          std::size_t cap = 10'000'000)
{
    const Eigen::Index n = k.rows();
    // K = R^T R with R upper triangular: a^T K a = sum_i (r_ii a_i + sum_{j>i} r_ij a_j)^2
    const RMatrix r = cholesky_lower(k).transpose();
    // relative slack so vectors sitting exactly on the sphere survive rounding
    const double rad = radius_sq * (1.0 + 1e-9);
    std::vector<IntegerVector> out;
    IntegerVector a = IntegerVector::Zero(n);
    std::vector<double> partial(static_cast<std::size_t>(n + 1), 0.0);

    auto recurse = [&](auto&& self, Eigen::Index i) -> void {
        // partial[i + 1] holds the contribution of coordinates i+1..n-1
        double centre = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j)
            centre += r(i, j) * static_cast<double>(a(j));
        centre /= r(i, i);
        const double rem = rad - partial[static_cast<std::size_t>(i + 1)];
        if (rem < 0.0)
            return;
        const double half = std::sqrt(rem) / r(i, i);
        const auto lo = static_cast<std::int64_t>(std::ceil(-centre - half - 1e-12));
        const auto hi = static_cast<std::int64_t>(std::floor(-centre + half + 1e-12));
        for (std::int64_t v = lo; v <= hi; ++v) {
            const double e = r(i, i) * (static_cast<double>(v) + centre);
            const double tot = partial[static_cast<std::size_t>(i + 1)] + e * e;
            if (tot > rad)
                continue;
            a(i) = v;
            partial[static_cast<std::size_t>(i)] = tot;
            if (i == 0) {
                if (!a.isZero()) {
                    Eigen::Index first = 0;
                    while (a(first) == 0)
                        ++first;
                    if (a(first) > 0) {
                        if (out.size() >= cap)
                            throw resource_error("enumerate_short_vectors: vector cap exceeded");
                        out.push_back(a);
                    }
                }
            } else {
                self(self, i - 1);
            }
        }
        a(i) = 0;
    };
    recurse(recurse, n - 1);

    std::vector<std::pair<double, std::size_t>> key(out.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        key[i] = {quadratic_norm(k, out[i]), i};
    std::stable_sort(key.begin(), key.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<IntegerVector> sorted;
    sorted.reserve(out.size());
    for (const auto& kv : key)
        sorted.push_back(out[kv.second]);
    return sorted;
}

namespace detail {

inline IntegerMatrix sort_rows_by_norm(const RMatrix& k, IntegerMatrix a)
{
    const Eigen::Index n = a.rows();
    std::vector<std::pair<double, Eigen::Index>> key(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        key[static_cast<std::size_t>(i)] = {quadratic_norm(k, a.row(i).transpose()), i};
    std::stable_sort(key.begin(), key.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    IntegerMatrix out(n, a.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        out.row(i) = a.row(key[static_cast<std::size_t>(i)].second);
    return out;
}

inline IntegerMatrix lll_candidate(const RMatrix& k, double delta)
{
    // lattice basis = rows of the lower Cholesky factor G (K = G G^T)
    const RMatrix g = cholesky_lower(k);
    return lll_reduce(g, delta);
}

inline double max_row_norm(const RMatrix& k, const IntegerMatrix& a)
{
    double m = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        m = std::max(m, quadratic_norm(k, a.row(i).transpose()));
    return m;
}

} // namespace detail

// Integer matrix for the IF receivers, rows sorted by ascending a^T K a.
//  - lll / lll+permutations: LLL-reduced basis of the lattice with Gram matrix K.
//  - exhaustive: greedy choice of the shortest linearly independent integer
//    vectors among all vectors inside the enumeration radius.
inline IntegerMatrix search_integer_matrix(const RMatrix& k_gram, const SearchConfig& cfg)
{
    const auto n = static_cast<int>(k_gram.rows());
    cfg.validate(n);
    IntegerMatrix lll = detail::sort_rows_by_norm(k_gram, detail::lll_candidate(k_gram, cfg.lll_delta));
    if (cfg.method != SearchMethod::exhaustive)
        return lll;

    const double radius_sq = cfg.enum_radius_sq > 0.0 ? cfg.enum_radius_sq : detail::max_row_norm(k_gram, lll);
    const auto candidates = enumerate_short_vectors(k_gram, radius_sq);
    IntegerMatrix chosen(n, n);
    RMatrix span(n, 0);
    int rank = 0;
    for (const auto& v : candidates) {
        RMatrix trial(n, rank + 1);
        trial.leftCols(rank) = span;
        trial.col(rank) = v.cast<double>();
        Eigen::FullPivLU<RMatrix> lu(trial);
        lu.setThreshold(1e-9);
        if (lu.rank() == rank + 1) {
            chosen.row(rank) = v.transpose();
            span = std::move(trial);
            if (++rank == n)
                break;
        }
    }
    if (rank < n)
        throw search_failure("search_integer_matrix: enumeration radius too small for a full-rank set");
    return chosen;
}

namespace detail {

struct SicChoice {
    double max_ell_sq = std::numeric_limits<double>::infinity();
    IntegerMatrix a;
    RVector ell;
};

// Best SIC row ordering of `a` (full permutation search when `permute`).
inline SicChoice best_sic_order(const RMatrix& k, const IntegerMatrix& a, bool permute)
{
    const Eigen::Index n = a.rows();
    const RMatrix ad = a.cast<double>();
    const RMatrix m = ad * k * ad.transpose();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    SicChoice best;
    RMatrix pm(n, n);
    RVector ell(n);
    do {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                pm(i, j) = m(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        const double worst = max_cholesky_diag(pm, &ell);
        if (worst * worst < best.max_ell_sq) {
            best.max_ell_sq = worst * worst;
            best.ell = ell;
            best.a.resize(n, a.cols());
            for (Eigen::Index i = 0; i < n; ++i)
                best.a.row(i) = a.row(perm[static_cast<std::size_t>(i)]);
        }
    } while (permute && std::next_permutation(perm.begin(), perm.end()));
    if (!std::isfinite(best.max_ell_sq))
        throw definiteness_error("IF-SIC: A K A^T is not positive definite (rank-deficient A?)");
    return best;
}

inline void check_real_channel(const RMatrix& h_real, int t)
{
    if (t < 1)
        throw domain_error("IF rate: time extension must be >= 1");
    if (h_real.rows() % 2 != 0 || h_real.cols() % 2 != 0)
        throw shape_error("IF rate: real channel must have even dimensions");
    if (h_real.cols() > 16)
        throw shape_error("IF rate: at most 16 real streams supported");
}

} // namespace detail

// IF-SIC rate of a fixed integer matrix, choosing the best SIC ordering of its rows
// when `permute` is set (otherwise the given order is used).
inline IfRateResult if_sic_rate_for(const RMatrix& k_gram, const IntegerMatrix& a, int t, bool permute)
{
    auto choice = detail::best_sic_order(k_gram, a, permute);
    IfRateResult res;
    res.rate_bits = detail::rate_from_max_ell_sq(choice.max_ell_sq, k_gram.rows(), t);
    res.a_matrix = std::move(choice.a);
    res.ell_diag = std::move(choice.ell);
    return res;
}

inline IfRateResult if_sic_rate(const RMatrix& h_real, int t, const SearchConfig& cfg = {})
{
    detail::check_real_channel(h_real, t);
    const RMatrix k = if_gram(h_real);
    const IntegerMatrix a = search_integer_matrix(k, cfg);
    const bool permute = cfg.method != SearchMethod::lll && k.rows() <= SearchConfig::kMaxPermutationDim;
    IfRateResult res = if_sic_rate_for(k, a, t, permute);
    res.method = cfg.method;
    return res;
}

// Plain IF rate of a fixed integer matrix; ell_diag holds sqrt(a_m^T K a_m).
inline IfRateResult if_plain_rate_for(const RMatrix& k_gram, const IntegerMatrix& a, int t)
{
    IfRateResult res;
    res.a_matrix = a;
    res.ell_diag.resize(a.rows());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double q = quadratic_norm(k_gram, a.row(i).transpose());
        res.ell_diag(i) = std::sqrt(q);
        worst = std::max(worst, q);
    }
    res.rate_bits = detail::rate_from_max_ell_sq(worst, k_gram.rows(), t);
    return res;
}

inline IfRateResult if_plain_rate(const RMatrix& h_real, int t, const SearchConfig& cfg = {})
{
    detail::check_real_channel(h_real, t);
    const RMatrix k = if_gram(h_real);
    IfRateResult res = if_plain_rate_for(k, search_integer_matrix(k, cfg), t);
    res.method = cfg.method;
    return res;
}

// Equal-rate joint-ML rate over the column-stream MAC:
//   (1/T) * min_S (n_cols / |S|) * log2 det(I + H_S^H H_S),
// S ranging over nonempty column subsets of the effective complex matrix.
inline double ml_mac_rate(const CMatrix& h_eff, int t = 1)
{
    if (t < 1)
        throw domain_error("ml_mac_rate: t must be >= 1");
    const auto n = static_cast<int>(h_eff.cols());
    if (n < 1 || n % t != 0)
        throw shape_error("ml_mac_rate: column count must be a positive multiple of t");
    if (n > 20)
        throw shape_error("ml_mac_rate: too many columns for subset enumeration");
    const CMatrix g = h_eff.adjoint() * h_eff;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx;
    idx.reserve(static_cast<std::size_t>(n));
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                idx.push_back(i);
        const auto s = static_cast<Eigen::Index>(idx.size());
        CMatrix sub(s, s);
        for (Eigen::Index i = 0; i < s; ++i)
            for (Eigen::Index j = 0; j < s; ++j)
                sub(i, j) = g(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        const double v = static_cast<double>(n) / static_cast<double>(s) * log2det_identity_plus(sub);
        best = std::min(best, v);
    }
    return std::max(best / t, 0.0);
}

// Same rate for a real effective channel whose columns are ordered [Re s; Im s]:
// complex symbol j owns columns j and j + n/2. Works for real-linear maps
// (conjugating codes) where no complex effective matrix exists.
inline double ml_mac_rate_real(const RMatrix& h_real, int t = 1)
{
    if (t < 1)
        throw domain_error("ml_mac_rate: t must be >= 1");
    const auto n2 = static_cast<int>(h_real.cols());
    if (n2 < 2 || n2 % 2 != 0)
        throw shape_error("ml_mac_rate: real channel needs an even, positive column count");
    const int n = n2 / 2;
    if (n > 20)
        throw shape_error("ml_mac_rate: too many columns for subset enumeration");
    const RMatrix g = h_real.transpose() * h_real;
    double best = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Index> idx;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                idx.push_back(i);
        const auto s = static_cast<Eigen::Index>(idx.size());
        for (Eigen::Index i = 0; i < s; ++i)
            idx.push_back(idx[static_cast<std::size_t>(i)] + n);
        RMatrix sub(2 * s, 2 * s);
        for (Eigen::Index i = 0; i < 2 * s; ++i)
            for (Eigen::Index j = 0; j < 2 * s; ++j)
                sub(i, j) = g(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        const double v = static_cast<double>(n) / static_cast<double>(s) * 0.5 * log2det_identity_plus(sub);
        best = std::min(best, v);
    }
    return std::max(best / t, 0.0);
}

} // namespace iflab
